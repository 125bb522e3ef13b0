#include "wickgen/expansion.hpp"

#include <stdexcept>

namespace wickgen {

namespace {
std::size_t ipow(int b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(b);
    return r;
}
}  // namespace

int MultipletSpace::block_size(int i) const {
    return static_cast<int>(ipow(spacetime_dim, ranks.at(static_cast<std::size_t>(i))));
}

int MultipletSpace::block_offset(int i) const {
    int off = 0;
    for (int j = 0; j < i; ++j) off += block_size(j);
    return off;
}

int MultipletSpace::total_dim() const { return block_offset(fields()); }

DenseTensor MultipletSpace::embed(int i, const DenseTensor& value) const {
    if (value.dim() != spacetime_dim || value.rank() != ranks.at(static_cast<std::size_t>(i)))
        throw std::invalid_argument("embed: field value has wrong shape");
    DenseTensor v = DenseTensor::zeros(total_dim(), 1, Var::Contra);
    const int off = block_offset(i);
    for (std::size_t c = 0; c < value.size(); ++c) v[static_cast<std::size_t>(off) + c] = value[c];
    return v;
}

DenseTensor MultipletSpace::random_field(int i, Rng& rng) const {
    DenseTensor v = DenseTensor::zeros(total_dim(), 1, Var::Contra);
    const int off = block_offset(i);
    for (int c = 0; c < block_size(i); ++c)
        v[static_cast<std::size_t>(off + c)] = rng.small_rat();
    return v;
}

CoefficientTable::CoefficientTable(MultipletSpace space, int max_order)
    : space_(std::move(space)), max_order_(max_order) {}

DenseTensor CoefficientTable::zero_of_order(int l) const {
    return DenseTensor::zeros(space_.total_dim(), l, Var::Co);
}

void CoefficientTable::set_order(int l, DenseTensor c) {
    if (l < 2 || l > max_order_)
        throw std::invalid_argument("coefficient order must lie in 2..max_order (order 1 is fixed to zero)");
    if (c.dim() != space_.total_dim() || c.rank() != l)
        throw std::invalid_argument("coefficient tensor has wrong shape");
    for (Var v : c.variance())
        if (v != Var::Co) throw std::invalid_argument("coefficient tensor must be covariant");
    if (!c.is_symmetric()) throw std::invalid_argument("coefficient tensor must be symmetric");
    by_order_.insert_or_assign(l, std::move(c));
}

const DenseTensor& CoefficientTable::order(int l) const {
    auto it = by_order_.find(l);
    if (it != by_order_.end()) return it->second;
    auto z = zeros_.find(l);
    if (z == zeros_.end()) z = zeros_.emplace(l, zero_of_order(l)).first;
    return z->second;
}

bool CoefficientTable::complete_up_to(int k) const {
    for (int l = 2; l <= k; ++l)
        if (!by_order_.count(l)) return false;
    return true;
}

namespace {

DenseTensor sym_power_product(const MultipletSpace& space,
                              const std::vector<DenseTensor>& embedded,
                              const MultiIndex& exps) {
    DenseTensor acc = DenseTensor::scalar(1, space.total_dim());
    bool any = false;
    for (std::size_t i = 0; i < exps.entries.size(); ++i)
        for (long c = 0; c < exps.entries[i]; ++c) {
            acc = any ? sym_product(acc, embedded[i]) : embedded[i];
            any = true;
        }
    return acc;
}

}  // namespace

std::vector<ExpansionTerm> expand_component(const MultipletSpace& space, const MultiIndex& P,
                                            const CoefficientTable& C,
                                            const std::vector<DenseTensor>& field_values) {
    const int N = space.fields();
    if (static_cast<int>(P.entries.size()) != N)
        throw std::invalid_argument("expand_component: multi-index length mismatch");
    if (static_cast<int>(field_values.size()) != N)
        throw std::invalid_argument("expand_component: one test value per field required");
    const long k = P.order();
    if (k < 1) throw std::invalid_argument("expand_component: |P| must be >= 1");
    if (!C.complete_up_to(static_cast<int>(k)))
        throw std::invalid_argument("expand_component: coefficient table incomplete");

    std::vector<DenseTensor> embedded;
    for (int i = 0; i < N; ++i) embedded.push_back(space.embed(i, field_values[static_cast<std::size_t>(i)]));

    std::vector<ExpansionTerm> out;
    // every Q <= P componentwise
    std::vector<long> q(static_cast<std::size_t>(N), 0);
    for (;;) {
        MultiIndex Q{q};
        const long l = Q.order();
        ExpansionTerm e;
        e.Q = Q;
        if (l == k) {
            e.binomial = 1;
            e.scalar = 1;
            e.value = sym_power_product(space, embedded, P);
            e.leading = true;
        } else {
            Int coeff = 1;
            for (int i = 0; i < N; ++i)
                coeff *= binomial(P.entries[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(i)]);
            MultiIndex PmQ;
            for (int i = 0; i < N; ++i)
                PmQ.entries.push_back(P.entries[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(i)]);
            DenseTensor fPmQ = sym_power_product(space, embedded, PmQ);
            DenseTensor s = contract_l(C.order(static_cast<int>(k - l)), fPmQ, static_cast<int>(k - l));
            e.binomial = coeff;
            e.scalar = s[0];
            e.value = sym_power_product(space, embedded, Q);
            e.value *= Rat(coeff) * e.scalar;
        }
        out.push_back(std::move(e));
        // advance odometer bounded by P
        int i = 0;
        while (i < N) {
            if (++q[static_cast<std::size_t>(i)] <= P.entries[static_cast<std::size_t>(i)]) break;
            q[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == N) break;
    }
    return out;
}

bool verify_expansion_consistency(const MultipletSpace& space, const MultiIndex& P,
                                  std::uint64_t seed) {
    const int N = space.fields();
    const long k = P.order();
    Rng rng(seed);
    if (k == 0) return true;  // degenerate component: nothing to check

    // random block-supported field values
    std::vector<DenseTensor> fields_st;
    std::vector<DenseTensor> embedded;
    for (int i = 0; i < N; ++i) {
        DenseTensor v = DenseTensor::zeros(space.spacetime_dim,
                                           space.ranks[static_cast<std::size_t>(i)], Var::Contra);
        for (std::size_t c = 0; c < v.size(); ++c) v[c] = rng.small_rat();
        fields_st.push_back(v);
        embedded.push_back(space.embed(i, v));
    }

    // random symmetric coefficients for every order 2..k
    CoefficientTable table(space, static_cast<int>(k));
    for (int l = 2; l <= k; ++l) {
        DenseTensor c = DenseTensor::zeros(space.total_dim(), l, Var::Co);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = rng.small_rat();
        table.set_order(l, c.symmetrized());
    }

    auto entries = expand_component(space, P, table, fields_st);

    // f^P as one symmetric product
    DenseTensor fP = [&] {
        DenseTensor acc = DenseTensor::scalar(1, space.total_dim());
        bool any = false;
        for (int i = 0; i < N; ++i)
            for (long c = 0; c < P.entries[static_cast<std::size_t>(i)]; ++c) {
                acc = any ? sym_product(acc, embedded[static_cast<std::size_t>(i)])
                          : embedded[static_cast<std::size_t>(i)];
                any = true;
            }
        return acc;
    }();

    for (long l = 0; l < k; ++l) {
        // direct route: C_{k-l} contracted into f^P all at once
        DenseTensor direct = contract_l(table.order(static_cast<int>(k - l)), fP,
                                        static_cast<int>(k - l));
        // expansion route: sum of the order-l entries
        DenseTensor summed = DenseTensor::zeros(space.total_dim(), static_cast<int>(l), Var::Contra);
        for (const auto& e : entries) {
            if (e.Q.order() != l || e.leading) continue;
            summed += e.value;
        }
        if (!(summed == direct)) return false;
    }
    return true;
}

}  // namespace wickgen
