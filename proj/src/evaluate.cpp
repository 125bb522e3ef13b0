#include "wickgen/evaluate.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "wickgen/linalg.hpp"

namespace wickgen {

EvalMetric EvalMetric::standard(int dim) {
    EvalMetric m;
    m.g_cov = DenseTensor::minkowski(dim, Var::Co);
    m.orientation = 1;
    m.eps_scale = 1;
    m.diagonal = true;
    return m;
}

EvalMetric EvalMetric::from_cov(DenseTensor g, int orientation) {
    EvalMetric m;
    const int n = g.dim();
    Mat gm(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            g.at({i, j});
    Rat d = det(gm);
    if (d == 0) throw std::invalid_argument("EvalMetric: degenerate metric");
    Rat ad = d < 0 ? Rat(-d) : d;
    auto root = pow_rat_exact(ad, Rat(1, 2));
    if (!root) throw std::invalid_argument("EvalMetric: sqrt|det g| must be rational");
    m.eps_scale = 1 / *root;
    m.diagonal = true;
    for (int i = 0; i < n && m.diagonal; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && g.at({i, j}) != 0) {
                m.diagonal = false;
                break;
            }
    m.g_cov = std::move(g);
    m.orientation = orientation;
    return m;
}

BlockValues random_block_values(const std::vector<BlockDescriptor>& blocks, int dim,
                                std::uint64_t seed) {
    BlockValues vals;
    for (const auto& b : blocks) {
        std::string k = b.key();
        if (vals.count(k)) continue;
        Rng rng = Rng(seed).fork(fnv1a(k));
        vals.emplace(k, symmetry_subspace(b.symmetry, dim).random(rng, Var::Contra));
    }
    return vals;
}

namespace {

using i128 = __int128;

inline i128 iabs(i128 v) { return v < 0 ? -v : v; }

Rat rat_from_i128(i128 v) {
    bool neg = v < 0;
    if (neg) v = -v;
    std::uint64_t lo = static_cast<std::uint64_t>(v & ~std::uint64_t(0));
    std::uint64_t hi = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v) >> 64);
    Int z(0);
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(hi), 0, 0, &hi);
    z <<= 64;
    Int zl(0);
    mpz_import(zl.get_mpz_t(), 1, 1, sizeof(lo), 0, 0, &lo);
    z += zl;
    if (neg) z = -z;
    return Rat(z);
}

double log2_of(i128 v) {
    v = iabs(v);
    int bits = 0;
    while (v > 0) {
        v >>= 1;
        ++bits;
    }
    return static_cast<double>(bits);
}

// One einsum factor. Exact value = scale * ints when `integer`, else rats.
struct EFactor {
    int dim = 1;
    std::vector<int> ids;
    bool integer = false;
    std::vector<Rat> rats;
    std::vector<i128> ints;
    Rat scale = 1;
    double bits = 0;  // log2 bound on max |ints| entry

    std::size_t size() const { return integer ? ints.size() : rats.size(); }
};

// try to switch a rational factor to the integer representation
void intify(EFactor& f) {
    if (f.integer) return;
    Int l = 1;
    for (const Rat& q : f.rats) {
        Int den = q.get_den();
        Int g;
        mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        l = l * den / g;
        if (mpz_sizeinbase(l.get_mpz_t(), 2) > 40) return;  // scale too wild
    }
    std::vector<i128> ints(f.rats.size());
    double maxbits = 0;
    for (std::size_t i = 0; i < f.rats.size(); ++i) {
        Int v = f.rats[i].get_num() * (l / f.rats[i].get_den());
        if (mpz_sizeinbase(v.get_mpz_t(), 2) > 100) return;
        bool neg = v < 0;
        Int a = neg ? Int(-v) : v;
        i128 acc = 0;
        // export via decimal-free path: split into 64-bit limbs
        Int hi = a >> 64;
        Int lo = a - (hi << 64);
        acc = (static_cast<i128>(hi.get_ui()) << 64) | static_cast<i128>(lo.get_ui());
        ints[i] = neg ? -acc : acc;
        maxbits = std::max(maxbits, log2_of(ints[i]));
    }
    f.ints = std::move(ints);
    f.rats.clear();
    f.integer = true;
    f.scale = f.scale / Rat(l);
    f.bits = maxbits;
}

void ratify(EFactor& f) {
    if (!f.integer) return;
    f.rats.resize(f.ints.size());
    for (std::size_t i = 0; i < f.ints.size(); ++i) f.rats[i] = rat_from_i128(f.ints[i]) * f.scale;
    f.ints.clear();
    f.integer = false;
    f.scale = 1;
}

EFactor from_tensor(const DenseTensor& t, std::vector<int> ids) {
    EFactor f;
    f.dim = t.dim();
    f.ids = std::move(ids);
    f.rats.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) f.rats[i] = t[i];
    intify(f);
    return f;
}

// summation weights: exact value = wscale * wints (integer path available to
// every weighted id)
struct Weight {
    std::vector<Rat> rats;
    std::vector<i128> ints;
    Rat scale = 1;
    bool integer = false;
    double bits = 0;
};
using Weights = std::map<int, Weight>;

Weight make_weight(const std::vector<Rat>& diag) {
    Weight w;
    w.rats = diag;
    Int l = 1;
    for (const Rat& q : diag) {
        Int den = q.get_den();
        Int g;
        mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        l = l * den / g;
    }
    if (mpz_sizeinbase(l.get_mpz_t(), 2) <= 40) {
        w.ints.resize(diag.size());
        bool ok = true;
        double maxbits = 0;
        for (std::size_t i = 0; i < diag.size() && ok; ++i) {
            Int v = diag[i].get_num() * (l / diag[i].get_den());
            if (mpz_sizeinbase(v.get_mpz_t(), 2) > 60) {
                ok = false;
                break;
            }
            long sv = v.get_si();
            w.ints[i] = sv;
            maxbits = std::max(maxbits, log2_of(sv));
        }
        if (ok) {
            w.integer = true;
            w.scale = Rat(1) / Rat(l);
            w.bits = maxbits;
        }
    }
    return w;
}

template <typename T>
std::vector<T> permute_data(const std::vector<T>& data, int dim, const std::vector<int>& ids,
                            const std::vector<int>& order) {
    const int rank = static_cast<int>(ids.size());
    std::vector<std::size_t> src_stride(static_cast<std::size_t>(rank));
    std::size_t s = 1;
    for (int k = rank - 1; k >= 0; --k) {
        src_stride[static_cast<std::size_t>(k)] = s;
        s *= static_cast<std::size_t>(dim);
    }
    std::vector<std::size_t> stride(static_cast<std::size_t>(rank));
    for (int k = 0; k < rank; ++k) {
        auto it = std::find(ids.begin(), ids.end(), order[static_cast<std::size_t>(k)]);
        stride[static_cast<std::size_t>(k)] = src_stride[static_cast<std::size_t>(it - ids.begin())];
    }
    std::vector<T> out(data.size());
    std::vector<int> digit(static_cast<std::size_t>(rank), 0);
    std::size_t src = 0;
    for (std::size_t dst = 0; dst < out.size(); ++dst) {
        out[dst] = data[src];
        for (int k = rank - 1; k >= 0; --k) {
            if (++digit[static_cast<std::size_t>(k)] < dim) {
                src += stride[static_cast<std::size_t>(k)];
                break;
            }
            digit[static_cast<std::size_t>(k)] = 0;
            src -= stride[static_cast<std::size_t>(k)] * static_cast<std::size_t>(dim - 1);
        }
    }
    return out;
}

EFactor permute_axes(EFactor f, const std::vector<int>& order) {
    if (order == f.ids) return f;
    if (f.integer)
        f.ints = permute_data(f.ints, f.dim, f.ids, order);
    else
        f.rats = permute_data(f.rats, f.dim, f.ids, order);
    f.ids = order;
    return f;
}

// sum repeated ids within a factor
EFactor trace_self(EFactor f, const Weights& w) {
    for (;;) {
        int p1 = -1, p2 = -1;
        for (std::size_t i = 0; i < f.ids.size() && p1 < 0; ++i)
            for (std::size_t j = i + 1; j < f.ids.size(); ++j)
                if (f.ids[i] == f.ids[j]) {
                    p1 = static_cast<int>(i);
                    p2 = static_cast<int>(j);
                    break;
                }
        if (p1 < 0) return f;
        const int rep = f.ids[static_cast<std::size_t>(p1)];

        // permute_axes needs unique axis labels
        std::vector<int> uids = f.ids;
        std::map<int, int> back;
        std::set<int> seen;
        int spare = 1 << 20;
        for (int& id : uids) {
            if (seen.count(id)) {
                back[spare] = id;
                id = spare++;
            } else {
                seen.insert(id);
            }
        }
        f.ids = uids;
        std::vector<int> rest;
        for (std::size_t i = 0; i < uids.size(); ++i)
            if (static_cast<int>(i) != p1 && static_cast<int>(i) != p2) rest.push_back(uids[i]);
        std::vector<int> target = rest;
        target.push_back(uids[static_cast<std::size_t>(p1)]);
        target.push_back(uids[static_cast<std::size_t>(p2)]);
        f = permute_axes(std::move(f), target);

        auto wit = w.find(rep);
        const Weight* weight = wit == w.end() ? nullptr : &wit->second;
        const std::size_t d = static_cast<std::size_t>(f.dim);
        std::size_t rsize = 1;
        for (std::size_t i = 0; i < rest.size(); ++i) rsize *= d;

        EFactor r;
        r.dim = f.dim;
        bool int_ok = f.integer && (!weight || weight->integer) &&
                      f.bits + (weight ? weight->bits : 0) + log2_of(static_cast<i128>(d)) < 120;
        if (int_ok) {
            r.integer = true;
            r.scale = f.scale * (weight ? weight->scale : Rat(1));
            r.ints.assign(rsize, 0);
            double maxbits = 0;
            for (std::size_t ri = 0; ri < rsize; ++ri) {
                i128 acc = 0;
                const std::size_t base = ri * d * d;
                for (std::size_t k = 0; k < d; ++k) {
                    i128 v = f.ints[base + k * d + k];
                    if (v == 0) continue;
                    acc += weight ? weight->ints[k] * v : v;
                }
                r.ints[ri] = acc;
                maxbits = std::max(maxbits, log2_of(acc));
            }
            r.bits = maxbits;
        } else {
            ratify(f);
            r.rats.assign(rsize, Rat(0));
            for (std::size_t ri = 0; ri < rsize; ++ri) {
                Rat acc = 0;
                const std::size_t base = ri * d * d;
                for (std::size_t k = 0; k < d; ++k) {
                    const Rat& v = f.rats[base + k * d + k];
                    if (v == 0) continue;
                    acc += weight ? weight->rats[k] * v : v;
                }
                r.rats[ri] = acc;
            }
        }
        r.ids = rest;
        for (int& id : r.ids) {
            auto it = back.find(id);
            if (it != back.end()) id = it->second;
        }
        f = std::move(r);
    }
}

EFactor contract(EFactor a, EFactor b, const Weights& w) {
    std::vector<int> shared;
    for (int id : a.ids)
        if (std::find(b.ids.begin(), b.ids.end(), id) != b.ids.end()) shared.push_back(id);
    std::vector<int> a_only, b_only;
    for (int id : a.ids)
        if (std::find(shared.begin(), shared.end(), id) == shared.end()) a_only.push_back(id);
    for (int id : b.ids)
        if (std::find(shared.begin(), shared.end(), id) == shared.end()) b_only.push_back(id);

    std::vector<int> a_order = a_only, b_order = b_only;
    a_order.insert(a_order.end(), shared.begin(), shared.end());
    b_order.insert(b_order.end(), shared.begin(), shared.end());
    a = permute_axes(std::move(a), a_order);
    b = permute_axes(std::move(b), b_order);

    std::size_t ssize = 1;
    for (std::size_t i = 0; i < shared.size(); ++i) ssize *= static_cast<std::size_t>(a.dim);
    const std::size_t na = a.size() / std::max<std::size_t>(ssize, 1);
    const std::size_t nb = b.size() / std::max<std::size_t>(ssize, 1);

    // combined weights over the shared assignment
    std::vector<const Weight*> shared_w(shared.size(), nullptr);
    bool weighted = false;
    bool weights_integer = true;
    double wbits = 0;
    Rat wscale = 1;
    for (std::size_t k = 0; k < shared.size(); ++k) {
        auto it = w.find(shared[k]);
        if (it != w.end()) {
            shared_w[k] = &it->second;
            weighted = true;
            weights_integer = weights_integer && it->second.integer;
            wbits += it->second.bits;
            if (it->second.integer) wscale *= it->second.scale;
        }
    }

    EFactor r;
    r.dim = a.dim;
    r.ids = a_only;
    r.ids.insert(r.ids.end(), b_only.begin(), b_only.end());

    bool int_ok = a.integer && b.integer && weights_integer &&
                  a.bits + b.bits + wbits + log2_of(static_cast<i128>(std::max<std::size_t>(ssize, 1))) < 120;

    if (int_ok) {
        std::vector<i128> wprod;
        if (weighted) {
            wprod.assign(ssize, 1);
            for (std::size_t si = 0; si < ssize; ++si) {
                std::size_t tmp = si;
                i128 prod = 1;
                for (std::size_t k = shared.size(); k-- > 0;) {
                    int digit = static_cast<int>(tmp % static_cast<std::size_t>(a.dim));
                    tmp /= static_cast<std::size_t>(a.dim);
                    if (shared_w[k]) prod *= shared_w[k]->ints[static_cast<std::size_t>(digit)];
                }
                wprod[si] = prod;
            }
        }
        r.integer = true;
        r.scale = a.scale * b.scale * wscale;
        r.ints.assign(na * nb, 0);
        double maxbits = 0;
        for (std::size_t ia = 0; ia < na; ++ia) {
            const i128* arow = &a.ints[ia * ssize];
            for (std::size_t ib = 0; ib < nb; ++ib) {
                const i128* brow = &b.ints[ib * ssize];
                i128 acc = 0;
                if (weighted) {
                    for (std::size_t s = 0; s < ssize; ++s) {
                        if (arow[s] == 0 || brow[s] == 0) continue;
                        acc += arow[s] * brow[s] * wprod[s];
                    }
                } else {
                    for (std::size_t s = 0; s < ssize; ++s) {
                        if (arow[s] == 0) continue;
                        acc += arow[s] * brow[s];
                    }
                }
                r.ints[ia * nb + ib] = acc;
                maxbits = std::max(maxbits, log2_of(acc));
            }
        }
        r.bits = maxbits;
        return r;
    }

    ratify(a);
    ratify(b);
    std::vector<Rat> wprod;
    if (weighted) {
        wprod.assign(ssize, Rat(1));
        for (std::size_t si = 0; si < ssize; ++si) {
            std::size_t tmp = si;
            for (std::size_t k = shared.size(); k-- > 0;) {
                int digit = static_cast<int>(tmp % static_cast<std::size_t>(a.dim));
                tmp /= static_cast<std::size_t>(a.dim);
                if (shared_w[k]) wprod[si] *= shared_w[k]->rats[static_cast<std::size_t>(digit)];
            }
        }
    }
    r.rats.assign(na * nb, Rat(0));
    Rat term;
    for (std::size_t ia = 0; ia < na; ++ia) {
        const Rat* arow = &a.rats[ia * ssize];
        for (std::size_t ib = 0; ib < nb; ++ib) {
            const Rat* brow = &b.rats[ib * ssize];
            Rat acc = 0;
            for (std::size_t s = 0; s < ssize; ++s) {
                if (arow[s] == 0 || brow[s] == 0) continue;
                term = arow[s] * brow[s];
                if (weighted) term *= wprod[s];
                acc += term;
            }
            r.rats[ia * nb + ib] = std::move(acc);
        }
    }
    return r;
}

Rat factor_entry(const EFactor& f, std::size_t i) {
    if (f.integer) return rat_from_i128(f.ints[i]) * f.scale;
    return f.rats[i];
}

}  // namespace

DenseTensor evaluate_term(const Term& t, const BlockValues& values, const EvalMetric& gm) {
    const int dim = gm.g_cov.dim();
    auto blocks = t.monomial.all_blocks();

    // slot layout
    struct SlotRef {
        int factor;  // block index, or -2 epsilon, or -1 output
        int pos;
    };
    std::vector<SlotRef> slots;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const DenseTensor* v = nullptr;
        auto it = values.find(blocks[b].key());
        if (it == values.end())
            throw std::invalid_argument("evaluate_term: missing value for block " + blocks[b].key());
        v = &it->second;
        if (v->rank() != blocks[b].rank || v->dim() != dim)
            throw std::invalid_argument("evaluate_term: mis-shaped value for block " +
                                        blocks[b].key());
        for (int s = 0; s < blocks[b].rank; ++s) slots.push_back({static_cast<int>(b), s});
    }
    if (t.epsilon)
        for (int s = 0; s < dim; ++s) slots.push_back({-2, s});
    for (int r = 0; r < t.out.rank; ++r) slots.push_back({-1, r});
    if (static_cast<int>(slots.size()) != t.total_slots())
        throw std::invalid_argument("evaluate_term: scheme does not match monomial/output");

    // assign einsum ids
    const int R = t.out.rank;
    std::vector<std::vector<int>> factor_ids(blocks.size() + 1);  // +1 for epsilon
    for (std::size_t b = 0; b < blocks.size(); ++b)
        factor_ids[b].assign(static_cast<std::size_t>(blocks[b].rank), -1);
    factor_ids[blocks.size()].assign(t.epsilon ? static_cast<std::size_t>(dim) : 0, -1);

    int next_id = R;  // 0..R-1 reserved for output slots
    Weights weights;
    std::vector<Rat> diag(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) diag[static_cast<std::size_t>(i)] = gm.g_cov.at({i, i});

    std::vector<EFactor> extra;                      // explicit metric factors (general path)
    std::vector<bool> lowered(static_cast<std::size_t>(R), false);
    std::vector<std::pair<int, int>> out_out;        // bare metric pairs

    const bool fast = gm.diagonal;
    auto gfactor = [&](int i, int j) {
        EFactor f = from_tensor(gm.g_cov, {i, j});
        extra.push_back(std::move(f));
    };

    auto set_id = [&](const SlotRef& s, int id) {
        if (s.factor == -2)
            factor_ids[blocks.size()][static_cast<std::size_t>(s.pos)] = id;
        else
            factor_ids[static_cast<std::size_t>(s.factor)][static_cast<std::size_t>(s.pos)] = id;
    };

    for (auto [x, y] : t.pairs) {
        SlotRef a = slots[static_cast<std::size_t>(x)];
        SlotRef b = slots[static_cast<std::size_t>(y)];
        if (a.factor == -1 && b.factor == -1) {
            out_out.push_back({a.pos, b.pos});
        } else if (a.factor == -1 || b.factor == -1) {
            if (a.factor == -1) std::swap(a, b);
            // block slot lowered into output position b.pos
            if (fast) {
                set_id(a, b.pos);
                lowered[static_cast<std::size_t>(b.pos)] = true;
            } else {
                int i = next_id++;
                set_id(a, i);
                gfactor(i, b.pos);
            }
        } else {
            if (fast) {
                int i = next_id++;
                set_id(a, i);
                set_id(b, i);
                weights[i] = make_weight(diag);
            } else {
                int i = next_id++, j = next_id++;
                set_id(a, i);
                set_id(b, j);
                gfactor(i, j);
            }
        }
    }

    // factor list
    std::vector<EFactor> factors;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        factors.push_back(from_tensor(values.at(blocks[b].key()), factor_ids[b]));
    if (t.epsilon) {
        DenseTensor eps = DenseTensor::levi_civita(dim, Var::Contra);
        eps *= gm.eps_scale * Rat(gm.orientation);
        factors.push_back(from_tensor(eps, factor_ids[blocks.size()]));
    }
    for (auto& f : extra) factors.push_back(std::move(f));

    for (auto& f : factors) f = trace_self(std::move(f), weights);

    // greedy: contract the pair minimizing the resulting rank
    while (factors.size() > 1) {
        std::size_t bi = 0, bj = 1;
        int best = 1 << 30;
        for (std::size_t i = 0; i < factors.size(); ++i)
            for (std::size_t j = i + 1; j < factors.size(); ++j) {
                int sh = 0;
                for (int id : factors[i].ids)
                    if (std::find(factors[j].ids.begin(), factors[j].ids.end(), id) !=
                        factors[j].ids.end())
                        ++sh;
                int res = static_cast<int>(factors[i].ids.size() + factors[j].ids.size()) - 2 * sh;
                if (res < best) {
                    best = res;
                    bi = i;
                    bj = j;
                }
            }
        EFactor r = contract(factors[bi], factors[bj], weights);
        factors.erase(factors.begin() + static_cast<long>(bj));
        factors.erase(factors.begin() + static_cast<long>(bi));
        factors.push_back(trace_self(std::move(r), weights));
    }

    EFactor res;
    if (factors.empty()) {
        res.dim = dim;
        res.rats = {Rat(1)};
    } else {
        res = std::move(factors[0]);
    }

    // lay result out in output order
    DenseTensor out = DenseTensor::zeros(dim, R, Var::Co);
    std::vector<int> pos_of(static_cast<std::size_t>(R), -1);
    for (std::size_t k = 0; k < res.ids.size(); ++k) {
        if (res.ids[k] < 0 || res.ids[k] >= R)
            throw std::logic_error("evaluate_term: stray summation index survived");
        pos_of[static_cast<std::size_t>(res.ids[k])] = static_cast<int>(k);
    }
    std::vector<int> ridx(res.ids.size());
    for (IndexIter it(dim, R); !it.done(); it.advance()) {
        std::span<const int> oid = *it;
        Rat v;
        if (res.ids.empty()) {
            v = factor_entry(res, 0);
        } else {
            for (int r = 0; r < R; ++r)
                if (pos_of[static_cast<std::size_t>(r)] >= 0)
                    ridx[static_cast<std::size_t>(pos_of[static_cast<std::size_t>(r)])] = oid[static_cast<std::size_t>(r)];
            std::size_t fi = 0;
            for (std::size_t k = 0; k < ridx.size(); ++k)
                fi = fi * static_cast<std::size_t>(dim) + static_cast<std::size_t>(ridx[k]);
            v = factor_entry(res, fi);
        }
        if (v == 0) continue;
        if (fast)
            for (int r = 0; r < R; ++r)
                if (lowered[static_cast<std::size_t>(r)])
                    v *= diag[static_cast<std::size_t>(oid[static_cast<std::size_t>(r)])];
        for (auto [p, q] : out_out)
            v *= gm.g_cov.at({oid[static_cast<std::size_t>(p)], oid[static_cast<std::size_t>(q)]});
        out.at(oid) = v;
    }

    // symmetrize over the output signature: average over permutations of
    // whole blocks within each run
    for (const auto& run : t.out.runs) {
        if (run.blocks.size() < 2) continue;
        std::vector<int> order(run.blocks.size());
        std::iota(order.begin(), order.end(), 0);
        DenseTensor acc = DenseTensor::zeros(dim, R, Var::Co);
        long count = 0;
        std::vector<int> perm(static_cast<std::size_t>(R));
        do {
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t b = 0; b < run.blocks.size(); ++b)
                for (std::size_t p = 0; p < run.blocks[b].size(); ++p)
                    perm[static_cast<std::size_t>(run.blocks[b][p])] =
                        run.blocks[static_cast<std::size_t>(order[b])][p];
            acc += out.permuted(perm);
            ++count;
        } while (std::next_permutation(order.begin(), order.end()));
        acc *= Rat(1, count);
        out = std::move(acc);
    }
    return out;
}

DenseTensor evaluate_term_naive(const Term& t, const BlockValues& values, const EvalMetric& gm) {
    const int dim = gm.g_cov.dim();
    auto blocks = t.monomial.all_blocks();

    struct SlotRef {
        int factor;
        int pos;
    };
    std::vector<SlotRef> slots;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int s = 0; s < blocks[b].rank; ++s) slots.push_back({static_cast<int>(b), s});
    if (t.epsilon)
        for (int s = 0; s < dim; ++s) slots.push_back({-2, s});
    for (int r = 0; r < t.out.rank; ++r) slots.push_back({-1, r});

    DenseTensor eps = DenseTensor::levi_civita(dim, Var::Contra);
    const int P = static_cast<int>(t.pairs.size());
    DenseTensor out = DenseTensor::zeros(dim, t.out.rank, Var::Co);

    std::vector<int> slot_index(slots.size(), 0);
    for (IndexIter oit(dim, t.out.rank); !oit.done(); oit.advance()) {
        std::span<const int> oid = *oit;
        // odometer over one (a, b) index pair per matching edge; indices tied
        // to output slots are pinned to the output component
        std::vector<int> a(static_cast<std::size_t>(P), 0), b(static_cast<std::size_t>(P), 0);
        std::vector<bool> a_free(static_cast<std::size_t>(P)), b_free(static_cast<std::size_t>(P));
        for (int p = 0; p < P; ++p) {
            const SlotRef& s1 = slots[static_cast<std::size_t>(t.pairs[static_cast<std::size_t>(p)].first)];
            const SlotRef& s2 = slots[static_cast<std::size_t>(t.pairs[static_cast<std::size_t>(p)].second)];
            a_free[static_cast<std::size_t>(p)] = s1.factor != -1;
            b_free[static_cast<std::size_t>(p)] = s2.factor != -1;
            if (!a_free[static_cast<std::size_t>(p)]) a[static_cast<std::size_t>(p)] = oid[static_cast<std::size_t>(s1.pos)];
            if (!b_free[static_cast<std::size_t>(p)]) b[static_cast<std::size_t>(p)] = oid[static_cast<std::size_t>(s2.pos)];
        }
        Rat total = 0;
        bool done = false;
        while (!done) {
            // metric product over edges
            Rat term = 1;
            for (int p = 0; p < P && term != 0; ++p)
                term *= gm.g_cov.at({a[static_cast<std::size_t>(p)], b[static_cast<std::size_t>(p)]});
            if (term != 0) {
                // slot values
                for (int p = 0; p < P; ++p) {
                    const auto& pr = t.pairs[static_cast<std::size_t>(p)];
                    const SlotRef& s1 = slots[static_cast<std::size_t>(pr.first)];
                    const SlotRef& s2 = slots[static_cast<std::size_t>(pr.second)];
                    if (s1.factor != -1) slot_index[static_cast<std::size_t>(pr.first)] = a[static_cast<std::size_t>(p)];
                    if (s2.factor != -1) slot_index[static_cast<std::size_t>(pr.second)] = b[static_cast<std::size_t>(p)];
                }
                int slot = 0;
                for (std::size_t bl = 0; bl < blocks.size() && term != 0; ++bl) {
                    std::vector<int> idx(static_cast<std::size_t>(blocks[bl].rank));
                    for (int s = 0; s < blocks[bl].rank; ++s) idx[static_cast<std::size_t>(s)] = slot_index[static_cast<std::size_t>(slot++)];
                    term *= values.at(blocks[bl].key()).at(idx);
                }
                if (t.epsilon && term != 0) {
                    std::vector<int> idx(static_cast<std::size_t>(dim));
                    for (int s = 0; s < dim; ++s) idx[static_cast<std::size_t>(s)] = slot_index[static_cast<std::size_t>(slot++)];
                    term *= eps.at(idx) * gm.eps_scale * Rat(gm.orientation);
                }
                total += term;
            }
            // advance odometer over free edge indices
            done = true;
            for (int p = 0; p < P; ++p) {
                auto bump = [&](std::vector<int>& v, std::vector<bool>& fr) {
                    if (!fr[static_cast<std::size_t>(p)]) return false;
                    if (++v[static_cast<std::size_t>(p)] < dim) return true;
                    v[static_cast<std::size_t>(p)] = 0;
                    return false;
                };
                if (bump(a, a_free) || bump(b, b_free)) {
                    done = false;
                    break;
                }
            }
        }
        out.at(oid) = total;
    }

    // symmetrize over the output runs by direct averaging
    for (const auto& run : t.out.runs) {
        if (run.blocks.size() < 2) continue;
        std::vector<int> order(run.blocks.size());
        std::iota(order.begin(), order.end(), 0);
        DenseTensor acc = DenseTensor::zeros(dim, t.out.rank, Var::Co);
        long count = 0;
        std::vector<int> perm(static_cast<std::size_t>(t.out.rank));
        do {
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t bb = 0; bb < run.blocks.size(); ++bb)
                for (std::size_t p = 0; p < run.blocks[bb].size(); ++p)
                    perm[static_cast<std::size_t>(run.blocks[bb][p])] =
                        run.blocks[static_cast<std::size_t>(order[bb])][p];
            acc += out.permuted(perm);
            ++count;
        } while (std::next_permutation(order.begin(), order.end()));
        acc *= Rat(1, count);
        out = std::move(acc);
    }
    return out;
}

}  // namespace wickgen
