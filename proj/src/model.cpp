#include "wickgen/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wickgen {

Classification classify(const BackgroundField& b) {
    Rat t = Rat(b.rank) + b.degree;
    if (t < 0) return Classification::Inadmissible;
    if (t == 0) return Classification::Marginal;
    return Classification::Admissible;
}

const char* to_string(Classification c) {
    switch (c) {
        case Classification::Inadmissible: return "inadmissible";
        case Classification::Admissible: return "admissible";
        case Classification::Marginal: return "marginal";
    }
    return "?";
}

long MultiIndex::order() const {
    long k = 0;
    for (long e : entries) k += e;
    return k;
}

Rat MultiIndex::pair(const std::vector<Rat>& v) const {
    if (v.size() != entries.size()) throw std::invalid_argument("multi-index length mismatch");
    Rat acc = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) acc += Rat(entries[i]) * v[i];
    return acc;
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) os << ",";
        os << entries[i];
    }
    os << ")";
    return os.str();
}

std::vector<MultiIndex> multi_indices(int parts, long k) {
    std::vector<MultiIndex> out;
    if (parts == 0) {
        if (k == 0) out.push_back(MultiIndex{});
        return out;
    }
    std::vector<long> cur(static_cast<std::size_t>(parts), 0);
    std::function<void(int, long)> rec = [&](int pos, long rem) {
        if (pos == parts - 1) {
            cur[static_cast<std::size_t>(pos)] = rem;
            out.push_back(MultiIndex{cur});
            return;
        }
        for (long v = rem; v >= 0; --v) {
            cur[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, rem - v);
        }
    };
    rec(0, k);
    std::sort(out.begin(), out.end());
    return out;
}

bool ModelSpec::all_admissible() const {
    for (const auto& b : backgrounds)
        if (classify(b) == Classification::Inadmissible) return false;
    return true;
}

void ModelSpec::validate() const {
    if (dim < 2) throw std::invalid_argument("model dimension must be >= 2");
    std::set<std::string> names;
    for (const auto& f : multiplet.entries) {
        if (f.rank < 0) throw std::invalid_argument("negative field rank: " + f.name);
        if (!names.insert(f.name).second)
            throw std::invalid_argument("duplicate field name: " + f.name);
    }
    for (const auto& b : backgrounds) {
        if (b.rank < 0) throw std::invalid_argument("negative background rank: " + b.name);
        if (!names.insert(b.name).second)
            throw std::invalid_argument("duplicate field name: " + b.name);
    }
    if (!all_admissible() && !allow_inadmissible) {
        for (const auto& b : backgrounds)
            if (classify(b) == Classification::Inadmissible)
                throw std::invalid_argument("inadmissible background '" + b.name +
                                            "' (rank + degree < 0); pass allow_inadmissible "
                                            "with an explicit weight cap to proceed");
    }
    if (allow_inadmissible && explicit_weight_cap < 0)
        throw std::invalid_argument("allow_inadmissible requires an explicit weight cap");
}

std::string ModelSpec::digest() const {
    std::ostringstream os;
    os << "dim=" << dim << ";oriented=" << oriented << ";fields=";
    for (const auto& f : multiplet.entries)
        os << f.name << ":" << f.rank << ":" << f.degree.get_str() << ",";
    os << ";backgrounds=";
    for (const auto& b : backgrounds)
        os << b.name << ":" << b.rank << ":" << b.degree.get_str() << ":"
           << (b.symmetry == FieldSymmetry::Symmetric ? "s" : "g") << ",";
    std::ostringstream hex;
    hex << std::hex << fnv1a(os.str());
    return hex.str();
}

Rat physical_degree(const ModelSpec& m, const MultiIndex& Q) {
    std::vector<Rat> d;
    for (const auto& f : m.multiplet.entries) d.push_back(f.degree);
    return Q.pair(d);
}

Rat target_weight(const ModelSpec& m, const MultiIndex& Q) {
    std::vector<Rat> dk;
    for (const auto& f : m.multiplet.entries) dk.push_back(f.degree + Rat(f.rank));
    return Q.pair(dk);
}

Rat curvature_block_weight(int derivs) { return Rat(2 + derivs); }

Rat background_block_weight(const BackgroundField& b, int derivs) {
    return b.degree + Rat(b.rank) + Rat(derivs);
}

long max_derivative_order(const ModelSpec& m, const Rat& W) {
    if (W < 0) return -1;
    for (const auto& b : m.backgrounds)
        if (classify(b) == Classification::Inadmissible)
            throw std::invalid_argument("max_derivative_order undefined with inadmissible background '" +
                                        b.name + "'");
    long best = 0;
    // curvature: 2 + a <= W
    Rat c = W - 2;
    if (c >= 0) best = std::max(best, to_long(Rat(c.get_num() / c.get_den())));
    for (const auto& b : m.backgrounds) {
        Rat room = W - (b.degree + Rat(b.rank));
        if (room >= 0) {
            Int fl = room.get_num() / room.get_den();  // floor for non-negative
            best = std::max(best, to_long(Rat(fl)));
        }
    }
    return best;
}

bool check_homogeneity(const Evaluator& evaluator, const std::vector<ScalingInput>& inputs,
                       int dim, const Rat& expected_degree, const std::vector<Rat>& lambdas,
                       std::uint64_t seed) {
    for (const Rat& lam : lambdas)
        if (lam <= 0) throw std::invalid_argument("scaling factors must be positive");

    for (int sample = 0; sample < 3; ++sample) {
        std::map<std::string, DenseTensor> base;
        Rng rng(seed + static_cast<std::uint64_t>(sample) * 7919);
        for (const auto& in : inputs) {
            Rng sub = rng.fork(fnv1a(in.name));
            base[in.name] = symmetry_subspace(in.symmetry, dim).random(sub, in.variance);
        }
        DenseTensor ref = evaluator(base);
        for (const Rat& lam : lambdas) {
            auto expect_scale = pow_rat_exact(lam, expected_degree);
            if (!expect_scale)
                throw std::invalid_argument("lambda^degree is irrational; choose lambda as a "
                                            "perfect power");
            std::map<std::string, DenseTensor> scaled;
            for (const auto& in : inputs) {
                auto f = pow_rat_exact(lam, in.weight);
                if (!f)
                    throw std::invalid_argument("lambda^weight is irrational for input '" +
                                                in.name + "'");
                DenseTensor t = base.at(in.name);
                t *= *f;
                scaled.emplace(in.name, std::move(t));
            }
            DenseTensor got = evaluator(scaled);
            DenseTensor want = ref;
            want *= *expect_scale;
            if (!(got == want)) return false;
        }
    }
    return true;
}

}  // namespace wickgen
