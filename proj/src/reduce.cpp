#include "wickgen/reduce.hpp"

#include <stdexcept>

#include "wickgen/linalg.hpp"

namespace wickgen {

namespace {

constexpr std::uint64_t kMarginalSalt = 0x6d61726769ull;
constexpr std::uint64_t kSampleSalt = 0x73616d70ull;

bool is_marginal_key(const BlockDescriptor& b) { return b.marginal; }

// Block values for one (witness, sample) cell: non-marginal blocks vary with
// the sample index, marginal blocks are pinned to the witness index.
BlockValues cell_values(const std::vector<BlockDescriptor>& blocks, int dim,
                        const ReduceOptions& opt, int witness, int sample) {
    BlockValues vals;
    for (const auto& b : blocks) {
        std::string k = b.key();
        if (vals.count(k)) continue;
        std::uint64_t salt;
        if (opt.marginal_mode && is_marginal_key(b))
            salt = kMarginalSalt * 1315423911ull + static_cast<std::uint64_t>(witness);
        else
            salt = kSampleSalt * 2654435761ull + static_cast<std::uint64_t>(sample);
        Rng rng = Rng(opt.seed).fork(fnv1a(k) ^ salt);
        vals.emplace(k, symmetry_subspace(b.symmetry, dim).random(rng, Var::Contra));
    }
    return vals;
}

Vec stacked_row(const Term& t, const ReduceOptions& opt, int witness) {
    EvalMetric gm = EvalMetric::standard(opt.dim);
    Vec row;
    auto blocks = t.monomial.all_blocks();
    for (int s = 0; s < opt.samples; ++s) {
        BlockValues vals = cell_values(blocks, opt.dim, opt, witness, s);
        DenseTensor v = evaluate_term(t, vals, gm);
        Vec flat = flatten_tensor(v);
        row.insert(row.end(), flat.begin(), flat.end());
    }
    return row;
}

}  // namespace

Vec evaluation_row(const Term& t, const ReduceOptions& opt, int witness_index) {
    return stacked_row(t, opt, witness_index);
}

Basis reduce_basis(const std::vector<Term>& terms, const ReduceOptions& opt) {
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i].out.key() != terms[0].out.key())
            throw std::invalid_argument("reduce_basis: mixed output signatures");

    const int witnesses = opt.marginal_mode ? opt.marginal_witnesses : 1;
    std::vector<RankAccumulator> acc(static_cast<std::size_t>(witnesses));

    Basis basis;
    basis.witness = {opt.seed, opt.samples, opt.marginal_mode ? opt.marginal_witnesses : 0,
                     opt.marginal_mode};
    for (const Term& t : terms) {
        bool keep = false;
        std::vector<Vec> rows;
        rows.reserve(static_cast<std::size_t>(witnesses));
        for (int w = 0; w < witnesses; ++w) rows.push_back(stacked_row(t, opt, w));
        for (int w = 0; w < witnesses; ++w)
            if (!acc[static_cast<std::size_t>(w)].contains(rows[static_cast<std::size_t>(w)])) {
                keep = true;
                break;
            }
        if (keep) {
            for (int w = 0; w < witnesses; ++w)
                acc[static_cast<std::size_t>(w)].offer(std::move(rows[static_cast<std::size_t>(w)]));
            basis.terms.push_back(t);
        }
    }
    return basis;
}

bool in_span(const Basis& basis, const Term& candidate, int dim) {
    return in_span_many(basis, {candidate}, dim)[0];
}

std::vector<bool> in_span_many(const Basis& basis, const std::vector<Term>& candidates, int dim) {
    ReduceOptions opt;
    opt.samples = basis.witness.samples;
    opt.marginal_witnesses = basis.witness.marginal_witnesses;
    opt.marginal_mode = basis.witness.marginal_mode;
    opt.seed = basis.witness.seed;
    opt.dim = dim;
    const int witnesses = opt.marginal_mode ? opt.marginal_witnesses : 1;
    std::vector<bool> ok(candidates.size(), true);
    for (int w = 0; w < witnesses; ++w) {
        RankAccumulator acc;
        for (const Term& t : basis.terms) acc.offer(stacked_row(t, opt, w));
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (!ok[c]) continue;
            if (!acc.contains(stacked_row(candidates[c], opt, w))) ok[c] = false;
        }
    }
    return ok;
}

bool verify_basis_stability(const Basis& basis, int dim, std::uint64_t fresh_seed) {
    ReduceOptions opt;
    opt.samples = basis.witness.samples;
    opt.marginal_witnesses = basis.witness.marginal_witnesses;
    opt.marginal_mode = basis.witness.marginal_mode;
    opt.seed = fresh_seed;
    opt.dim = dim;
    const int witnesses = opt.marginal_mode ? opt.marginal_witnesses : 1;
    // replay the greedy keep-decision for every kept term under fresh seeds
    std::vector<RankAccumulator> acc(static_cast<std::size_t>(witnesses));
    for (const Term& t : basis.terms) {
        bool keep = false;
        std::vector<Vec> rows;
        for (int w = 0; w < witnesses; ++w) rows.push_back(stacked_row(t, opt, w));
        for (int w = 0; w < witnesses; ++w)
            if (!acc[static_cast<std::size_t>(w)].contains(rows[static_cast<std::size_t>(w)])) {
                keep = true;
                break;
            }
        if (!keep) return false;
        for (int w = 0; w < witnesses; ++w)
            acc[static_cast<std::size_t>(w)].offer(std::move(rows[static_cast<std::size_t>(w)]));
    }
    return true;
}

}  // namespace wickgen
