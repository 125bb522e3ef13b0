#include "wickgen/endo.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "wickgen/render.hpp"

namespace wickgen {

EndoValue::EndoValue(Mat matrix) : m_(std::move(matrix)) {
    for (const auto& row : m_)
        if (row.size() != m_.size()) throw std::invalid_argument("EndoValue: matrix not square");
}

EndoValue EndoValue::from_covariant(const DenseTensor& xi_cov) {
    const int n = xi_cov.dim();
    if (xi_cov.rank() != 2) throw std::invalid_argument("EndoValue: rank-2 tensor required");
    Mat m(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
    // x^a_b = eta^{ac} xi_{cb}; eta^{00} = -1
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Rat v = xi_cov.at({a, b});
            m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a == 0) ? Rat(-v) : v;
        }
    return EndoValue(std::move(m));
}

EndoValue EndoValue::from_contravariant(const DenseTensor& xi_con) {
    const int n = xi_con.dim();
    if (xi_con.rank() != 2) throw std::invalid_argument("EndoValue: rank-2 tensor required");
    Mat m(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
    // x^a_b = xi^{ac} eta_{cb}
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Rat v = xi_con.at({a, b});
            m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (b == 0) ? Rat(-v) : v;
        }
    return EndoValue(std::move(m));
}

bool EndoValue::self_adjoint() const {
    const std::size_t n = m_.size();
    // eta * m symmetric, eta = diag(-1, 1, ..., 1)
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            Rat lhs = (a == 0) ? Rat(-m_[a][b]) : m_[a][b];
            Rat rhs = (b == 0) ? Rat(-m_[b][a]) : m_[b][a];
            if (lhs != rhs) return false;
        }
    return true;
}

std::vector<Rat> trace_invariants(const EndoValue& x) {
    const std::size_t n = x.matrix().size();
    std::vector<Rat> out;
    Mat p = x.matrix();
    for (std::size_t k = 1; k <= n; ++k) {
        Rat tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += p[i][i];
        out.push_back(tr);
        if (k < n) p = mat_mul(p, x.matrix());
    }
    return out;
}

Rat reduce_trace(long p, const std::vector<Rat>& inv) {
    const long n = static_cast<long>(inv.size());
    if (p <= n) throw std::invalid_argument("reduce_trace: p <= n needs no reduction");
    if (p > 2 * n) throw std::invalid_argument("reduce_trace: p > 2n out of supported range");
    // Newton identities: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
    std::vector<Rat> e(static_cast<std::size_t>(n) + 1, Rat(0));
    e[0] = 1;
    for (long k = 1; k <= n; ++k) {
        Rat acc = 0;
        for (long i = 1; i <= k; ++i) {
            Rat term = e[static_cast<std::size_t>(k - i)] * inv[static_cast<std::size_t>(i - 1)];
            if ((i - 1) % 2 == 1) term = -term;
            acc += term;
        }
        e[static_cast<std::size_t>(k)] = acc / Rat(k);
    }
    // Cayley-Hamilton: p_m = sum_{i=1..n} (-1)^{i+1} e_i p_{m-i} for m > n
    std::vector<Rat> power = inv;
    for (long m = n + 1; m <= p; ++m) {
        Rat acc = 0;
        for (long i = 1; i <= n; ++i) {
            Rat term = e[static_cast<std::size_t>(i)] * power[static_cast<std::size_t>(m - i - 1)];
            if ((i + 1) % 2 == 1) term = -term;
            acc += term;
        }
        power.push_back(acc);
    }
    return power[static_cast<std::size_t>(p - 1)];
}

Rat discriminant(const EndoValue& x) {
    const long n = static_cast<long>(x.matrix().size());
    std::vector<Rat> inv = trace_invariants(x);
    // extended power traces up to 2n - 2
    std::vector<Rat> tr(static_cast<std::size_t>(2 * n - 1));
    tr[0] = Rat(n);  // tr x^0
    for (long k = 1; k <= n; ++k) tr[static_cast<std::size_t>(k)] = inv[static_cast<std::size_t>(k - 1)];
    for (long k = n + 1; k <= 2 * n - 2; ++k)
        tr[static_cast<std::size_t>(k)] = reduce_trace(k, inv);
    Mat h(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = tr[static_cast<std::size_t>(i + j)];
    return det(h);
}

Poly char_poly(const EndoValue& x) {
    // Faddeev-LeVerrier: c_n t^n + ... with c_n = 1
    const long n = static_cast<long>(x.matrix().size());
    std::vector<Rat> c(static_cast<std::size_t>(n) + 1, Rat(0));
    c[static_cast<std::size_t>(n)] = 1;
    Mat m = identity(static_cast<std::size_t>(n));
    for (long k = 1; k <= n; ++k) {
        m = mat_mul(x.matrix(), m);
        Rat tr = 0;
        for (std::size_t i = 0; i < m.size(); ++i) tr += m[i][i];
        Rat ck = -tr / Rat(k);
        c[static_cast<std::size_t>(n - k)] = ck;
        for (std::size_t i = 0; i < m.size(); ++i) m[i][i] += ck;
    }
    return Poly(std::move(c));
}

namespace {

// columns of adj(t I - x) as polynomial vectors: v_j(t) such that
// (t I - x) v_j(t) = charpoly(t) e_j; eigenvector for simple root t0 is
// any nonzero column of adj(t0 I - x).
std::vector<std::vector<Poly>> adjugate_columns(const EndoValue& x) {
    // Faddeev-LeVerrier also yields adj(tI - A) = sum_k M_k t^{n-1-k}
    const long n = static_cast<long>(x.matrix().size());
    std::vector<Mat> ms;  // M_0 = I, M_k = A M_{k-1} + c_{n-k} I
    Mat m = identity(static_cast<std::size_t>(n));
    ms.push_back(m);
    Poly cp = char_poly(x);
    for (long k = 1; k < n; ++k) {
        m = mat_mul(x.matrix(), m);
        Rat ck = cp.coeff(static_cast<int>(n - k));
        for (std::size_t i = 0; i < m.size(); ++i) m[i][i] += ck;
        ms.push_back(m);
    }
    std::vector<std::vector<Poly>> cols(static_cast<std::size_t>(n),
                                        std::vector<Poly>(static_cast<std::size_t>(n)));
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) {
            std::vector<Rat> coeffs(static_cast<std::size_t>(n), Rat(0));
            for (long k = 0; k < n; ++k)
                coeffs[static_cast<std::size_t>(n - 1 - k)] =
                    ms[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = Poly(std::move(coeffs));
        }
    return cols;
}

}  // namespace

OrbitRegion orbit_region(const EndoValue& x) {
    OrbitRegion r;
    Rat disc = discriminant(x);
    if (disc == 0) {
        r.kind = OrbitRegion::Z0;
        r.label = "Z0";
        return r;
    }
    Poly cp = char_poly(x);
    const int n = x.dim();
    if (sturm_count_all(cp) < n) {
        r.kind = OrbitRegion::Indeterminate;
        r.label = "Indeterminate(complex-or-defective)";
        return r;
    }
    // distinct real eigenvalues; exactly one eigenline is eta-timelike
    auto intervals = isolate_real_roots(cp);
    auto cols = adjugate_columns(x);
    int timelike = -1;
    for (std::size_t root = 0; root < intervals.size(); ++root) {
        // pick a column of the adjugate that does not vanish at this root
        for (std::size_t j = 0; j < cols.size() && timelike < 0; ++j) {
            // q(t) = eta(v_j(t), v_j(t))
            Poly q;
            for (std::size_t i = 0; i < cols[j].size(); ++i) {
                Poly sq = cols[j][i] * cols[j][i];
                q = (i == 0) ? sq * Rat(-1) : q + sq;
            }
            int sgn = sign_at_root(cp, intervals[root], q);
            if (sgn < 0) {
                timelike = static_cast<int>(root);
            } else if (sgn > 0) {
                break;  // this eigenline is spacelike; no other column differs
            }
            // sgn == 0: column vanishes at the root (or the vector is null,
            // impossible for eta-self-adjoint with distinct real roots);
            // try the next column
        }
        if (timelike >= 0) break;
    }
    r.kind = OrbitRegion::Real;
    r.timelike_position = timelike;
    std::ostringstream os;
    os << "Zreal(timelike@" << timelike << "/" << n << ")";
    r.label = os.str();
    return r;
}

std::vector<ScalarInvariant> scalar_invariant_basis(const ModelSpec& m,
                                                    const std::vector<int>& marginal_backgrounds,
                                                    int max_degree, std::uint64_t seed) {
    for (int j : marginal_backgrounds) {
        const auto& b = m.backgrounds.at(static_cast<std::size_t>(j));
        if (classify(b) != Classification::Marginal || b.rank == 0)
            throw std::invalid_argument("scalar_invariant_basis: '" + b.name +
                                        "' is not a marginal tensor field");
    }
    // monomials: multisets of the undifferentiated marginal blocks, sizes
    // 1..max_degree (degree 0 contributes the constant term)
    std::vector<BlockDescriptor> gens;
    for (int j : marginal_backgrounds) gens.push_back(make_background_block(m, j, 0));
    std::sort(gens.begin(), gens.end());

    std::vector<Term> candidates;
    OutputSignature out = OutputSignature::plain(0);
    std::vector<BlockDescriptor> cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t from, int budget) {
        if (!cur.empty()) {
            Monomial mono;
            mono.marginal_blocks = cur;
            mono.total_weight = 0;
            for (Term& t : enumerate_schemes(mono, out, m.oriented, m.dim))
                candidates.push_back(std::move(t));
        }
        if (budget == 0) return;
        for (std::size_t i = from; i < gens.size(); ++i) {
            cur.push_back(gens[i]);
            rec(i, budget - 1);
            cur.pop_back();
        }
    };
    rec(0, max_degree);
    std::sort(candidates.begin(), candidates.end(),
              [](const Term& a, const Term& b) { return a.key() < b.key(); });

    ReduceOptions opt;
    opt.samples = static_cast<int>(candidates.size()) + 3;  // rank-0 rows: one entry per sample
    opt.marginal_mode = false;  // plain linear independence of the invariants
    opt.seed = seed;
    opt.dim = m.dim;
    Basis basis = reduce_basis(candidates, opt);

    std::vector<ScalarInvariant> result;
    {
        // degree-0 constant
        Monomial empty;
        empty.total_weight = 0;
        Term one;
        one.monomial = empty;
        one.out = out;
        one.scheme_key = "e0#";
        ScalarInvariant c;
        c.term = one;
        c.display = "1";
        c.decomposable = false;
        result.push_back(std::move(c));
    }
    for (const Term& t : basis.terms) {
        ScalarInvariant si;
        si.term = t;
        si.display = render_term(t);
        si.decomposable = t.connected_components() >= 2;
        result.push_back(std::move(si));
    }
    return result;
}

}  // namespace wickgen
