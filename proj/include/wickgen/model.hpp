#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wickgen/symmetry.hpp"
#include "wickgen/tensor.hpp"

namespace wickgen {

enum class FieldSymmetry { General, Symmetric };

struct DynamicalField {
    std::string name;
    int rank = 0;   // covariant tensor rank k_i
    Rat degree;     // physical scaling degree d_{A_i}
};

struct FieldMultiplet {
    std::vector<DynamicalField> entries;
    int size() const { return static_cast<int>(entries.size()); }
};

struct BackgroundField {
    std::string name;
    int rank = 0;  // l_j
    Rat degree;    // s_j
    FieldSymmetry symmetry = FieldSymmetry::General;
};

enum class Classification { Inadmissible, Admissible, Marginal };

/// marginal iff l + s = 0; admissible iff l + s >= 0
Classification classify(const BackgroundField& b);
const char* to_string(Classification c);

/// Multi-index over the dynamical multiplet.
struct MultiIndex {
    std::vector<long> entries;
    long order() const;  // |Q|
    Rat pair(const std::vector<Rat>& v) const;
    bool operator==(const MultiIndex& o) const { return entries == o.entries; }
    bool operator<(const MultiIndex& o) const { return entries < o.entries; }
    std::string str() const;
};

/// all Q >= 0 with |Q| = k over `parts` fields
std::vector<MultiIndex> multi_indices(int parts, long k);

struct ModelSpec {
    int dim = 4;
    bool oriented = false;
    FieldMultiplet multiplet;
    std::vector<BackgroundField> backgrounds;
    /// weight cap supplied with --allow-inadmissible (negative = unset)
    Rat explicit_weight_cap = Rat(-1);
    bool allow_inadmissible = false;

    bool all_admissible() const;
    std::string digest() const;
    void validate() const;  // throws on inconsistent content
};

/// <Q, d_A>
Rat physical_degree(const ModelSpec& m, const MultiIndex& Q);
/// W = <Q, d_A + k>, the weight every monomial in the Q-sector must reach
Rat target_weight(const ModelSpec& m, const MultiIndex& Q);

struct BlockDescriptor;  // defined in blocks.hpp

/// coordinate-scaling weight of one generator coordinate:
/// curvature with a derivatives -> 2+a; background j with b derivatives
/// -> s_j + l_j + b
Rat curvature_block_weight(int derivs);
Rat background_block_weight(const BackgroundField& b, int derivs);

/// Largest derivative count possible within weight W (max over curvature and
/// all backgrounds), floored at 0; -1 when W < 0 (empty sector). Throws when
/// an inadmissible background makes the bound meaningless.
long max_derivative_order(const ModelSpec& m, const Rat& W);

/// One named input to a homogeneity probe: tensors are drawn from the given
/// symmetry class and scale with weight `weight` under physical scaling.
struct ScalingInput {
    std::string name;
    SymmetryType symmetry;
    Rat weight;
    Var variance = Var::Contra;
};

using Evaluator = std::function<DenseTensor(const std::map<std::string, DenseTensor>&)>;

/// Order-zero homogeneity test: evaluator(lambda-scaled inputs) must equal
/// lambda^expected_degree * evaluator(inputs), exactly, for every lambda and
/// three seeded input sets. Exact mode: lambda^w must be rational for every
/// input weight w and for expected_degree; otherwise throws.
bool check_homogeneity(const Evaluator& evaluator, const std::vector<ScalingInput>& inputs,
                       int dim, const Rat& expected_degree, const std::vector<Rat>& lambdas,
                       std::uint64_t seed);

}  // namespace wickgen
