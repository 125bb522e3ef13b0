#pragma once

#include <map>
#include <vector>

#include "wickgen/model.hpp"
#include "wickgen/tensor.hpp"

namespace wickgen {

/// Direct-sum multiplet modeled on block-supported dense tensors: the fiber
/// is R^D with D = sum of the per-field block sizes n^{k_i}; a field value
/// occupies its own block and vanishes elsewhere.
struct MultipletSpace {
    std::vector<int> ranks;  // k_i
    int spacetime_dim = 4;

    int fields() const { return static_cast<int>(ranks.size()); }
    int block_size(int i) const;
    int block_offset(int i) const;
    int total_dim() const;  // D
    /// embed a contravariant rank-k_i spacetime tensor as a D-vector
    DenseTensor embed(int i, const DenseTensor& value) const;
    /// random block-supported field value (deterministic in seed)
    DenseTensor random_field(int i, Rng& rng) const;
};

/// Counterterm coefficient family: one covariant symmetric rank-l tensor over
/// the multiplet fiber per order l. Order 1 is identically zero.
class CoefficientTable {
public:
    CoefficientTable(MultipletSpace space, int max_order);

    const MultipletSpace& space() const { return space_; }
    int max_order() const { return max_order_; }
    /// l >= 2 only; the tensor must be covariant symmetric rank l over D
    void set_order(int l, DenseTensor c);
    /// orders 0..max; l = 1 (and unset orders <= max) give the zero tensor
    const DenseTensor& order(int l) const;
    bool complete_up_to(int k) const;  // orders 2..k all set

private:
    MultipletSpace space_;
    int max_order_;
    std::map<int, DenseTensor> by_order_;
    DenseTensor zero_of_order(int l) const;
    mutable std::map<int, DenseTensor> zeros_;
};

struct ExpansionTerm {
    MultiIndex Q;
    Int binomial;       // prod_i binom(p_i, q_i)
    Rat scalar;         // C^{P-Q} . f^{P-Q}, the fully contracted coefficient
    DenseTensor value;  // binomial * scalar * f^{(.)Q}; for Q = P the leading f^{(.)P}
    bool leading = false;
};

/// Component expansion of the general renormalization formula: one entry per
/// Q <= P, exact.
std::vector<ExpansionTerm> expand_component(const MultipletSpace& space, const MultiIndex& P,
                                            const CoefficientTable& C,
                                            const std::vector<DenseTensor>& field_values);

/// Oracle identity: for every l < |P|, summing the order-l expansion entries
/// must reproduce the direct global contraction C_l . (f1^p1 (.) ... (.) fN^pN)
/// computed in the tensor core. Random decomposable fields and random
/// symmetric coefficients; exact.
bool verify_expansion_consistency(const MultipletSpace& space, const MultiIndex& P,
                                  std::uint64_t seed);

}  // namespace wickgen
