#include "wickgen/blocks.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace wickgen {

std::string BlockDescriptor::key() const {
    std::ostringstream os;
    os << static_cast<int>(kind) << ":" << background_index << ":" << derivs;
    return os.str();
}

BlockDescriptor make_curvature_block(int derivs) {
    BlockDescriptor b;
    b.kind = BlockKind::CurvatureS;
    b.derivs = derivs;
    b.rank = 4 + derivs;
    b.symmetry = SymmetryType::curvature(derivs);
    b.coord_weight = curvature_block_weight(derivs);
    b.phys_weight = Rat(6 + 2 * derivs);
    b.name = "S";
    return b;
}

BlockDescriptor make_background_block(const ModelSpec& m, int background_index, int derivs) {
    const BackgroundField& f = m.backgrounds.at(static_cast<std::size_t>(background_index));
    BlockDescriptor b;
    b.kind = BlockKind::Background;
    b.background_index = background_index;
    b.derivs = derivs;
    b.rank = f.rank + derivs;
    b.symmetry = SymmetryType::background(f.rank, f.symmetry == FieldSymmetry::Symmetric, derivs);
    b.coord_weight = background_block_weight(f, derivs);
    // contravariant jet coordinate: covariant core s_j plus one inverse metric
    // per raised index (field and derivative slots alike)
    b.phys_weight = f.degree + Rat(2 * (f.rank + derivs));
    b.marginal = (derivs == 0) && classify(f) == Classification::Marginal;
    b.name = f.name;
    return b;
}

std::vector<BlockDescriptor> Monomial::all_blocks() const {
    std::vector<BlockDescriptor> all = blocks;
    all.insert(all.end(), marginal_blocks.begin(), marginal_blocks.end());
    return all;
}

std::string Monomial::key() const {
    std::ostringstream os;
    for (const auto& b : blocks) os << b.key() << "|";
    os << "/m:";
    for (const auto& b : marginal_blocks) os << b.key() << "|";
    return os.str();
}

BlockCatalog catalog_blocks(const ModelSpec& m, const Rat& W) {
    for (const auto& b : m.backgrounds)
        if (classify(b) == Classification::Inadmissible && !m.allow_inadmissible)
            throw std::invalid_argument("catalog_blocks: inadmissible background '" + b.name + "'");

    Rat cap = W;
    if (m.allow_inadmissible && m.explicit_weight_cap >= 0 && m.explicit_weight_cap < cap)
        cap = m.explicit_weight_cap;

    BlockCatalog cat;
    if (cap >= 2) {
        for (int a = 0;; ++a) {
            BlockDescriptor b = make_curvature_block(a);
            if (b.coord_weight > cap) break;
            cat.weighted.push_back(b);
        }
    }
    for (std::size_t j = 0; j < m.backgrounds.size(); ++j) {
        const BackgroundField& f = m.backgrounds[j];
        Classification c = classify(f);
        // undifferentiated marginal scalars live inside the smooth
        // coefficients; marginal tensors enter as weight-zero blocks. The
        // differentiated blocks below are kept either way.
        if (c == Classification::Marginal && f.rank > 0)
            cat.marginal.push_back(make_background_block(m, static_cast<int>(j), 0));
        // differentiated (or intrinsically weighted) blocks; weight grows with
        // the derivative count, so the scan below terminates. Blocks of
        // non-positive weight (possible only for inadmissible backgrounds)
        // are outside the weight-capped catalog.
        for (int d = 0;; ++d) {
            Rat w = background_block_weight(f, d);
            if (w > cap) break;
            if (w > 0) cat.weighted.push_back(make_background_block(m, static_cast<int>(j), d));
        }
    }
    std::sort(cat.weighted.begin(), cat.weighted.end());
    std::sort(cat.marginal.begin(), cat.marginal.end());
    return cat;
}

std::vector<Monomial> enumerate_monomials_for_weight(const ModelSpec& m, const Rat& W,
                                                     int marginal_cap) {
    std::vector<Monomial> out;
    if (W < 0) return out;
    if (marginal_cap < 0) throw std::invalid_argument("marginal_cap must be >= 0");

    BlockCatalog cat = catalog_blocks(m, W);
    std::vector<Monomial> bare;

    // multisets of positive-weight blocks with weights summing to exactly W
    std::vector<BlockDescriptor> cur;
    std::function<void(std::size_t, Rat)> rec = [&](std::size_t from, Rat remaining) {
        if (remaining == 0) {
            Monomial mono;
            mono.blocks = cur;
            mono.total_weight = W;
            bare.push_back(std::move(mono));
            return;
        }
        for (std::size_t i = from; i < cat.weighted.size(); ++i) {
            if (cat.weighted[i].coord_weight > remaining) continue;
            cur.push_back(cat.weighted[i]);
            rec(i, remaining - cat.weighted[i].coord_weight);
            cur.pop_back();
        }
    };
    rec(0, W);

    // dress each bare monomial with 0..marginal_cap marginal tensor blocks
    for (const Monomial& base : bare) {
        std::vector<BlockDescriptor> marg;
        std::function<void(std::size_t, int)> dress = [&](std::size_t from, int budget) {
            Monomial mono = base;
            mono.marginal_blocks = marg;
            out.push_back(std::move(mono));
            if (budget == 0) return;
            for (std::size_t i = from; i < cat.marginal.size(); ++i) {
                marg.push_back(cat.marginal[i]);
                dress(i, budget - 1);
                marg.pop_back();
            }
        };
        dress(0, marginal_cap);
    }

    std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
        if (a.marginal_count() != b.marginal_count()) return a.marginal_count() < b.marginal_count();
        return a.key() < b.key();
    });
    return out;
}

std::vector<Monomial> enumerate_monomials(const ModelSpec& m, const MultiIndex& Q,
                                          int marginal_cap) {
    return enumerate_monomials_for_weight(m, target_weight(m, Q), marginal_cap);
}

}  // namespace wickgen
