#include "wickgen/symmetry.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wickgen {

SymmetryType SymmetryType::none(int rank) {
    SymmetryType s;
    s.rank = rank;
    return s;
}

SymmetryType SymmetryType::symmetric(int rank) {
    SymmetryType s;
    s.rank = rank;
    if (rank >= 2) {
        std::vector<int> all(static_cast<std::size_t>(rank));
        std::iota(all.begin(), all.end(), 0);
        s.groups.push_back(all);
    }
    return s;
}

SymmetryType SymmetryType::antisymmetric(int rank) {
    SymmetryType s;
    s.rank = rank;
    for (int i = 0; i < rank; ++i)
        for (int j = i + 1; j < rank; ++j) s.vanishing_syms.push_back({i, j});
    return s;
}

SymmetryType SymmetryType::curvature(int derivs) {
    SymmetryType s;
    s.rank = 4 + derivs;
    s.groups.push_back({0, 1});
    std::vector<int> tail;
    for (int i = 2; i < s.rank; ++i) tail.push_back(i);
    s.groups.push_back(tail);
    std::vector<int> cyc = {1};
    cyc.insert(cyc.end(), tail.begin(), tail.end());
    s.vanishing_syms.push_back(cyc);
    if (derivs == 0) s.exchanges.push_back({{0, 1}, {2, 3}});
    return s;
}

SymmetryType SymmetryType::background(int field_rank, bool symmetric_field, int derivs) {
    SymmetryType s;
    s.rank = field_rank + derivs;
    if (symmetric_field && field_rank >= 2) {
        std::vector<int> f(static_cast<std::size_t>(field_rank));
        std::iota(f.begin(), f.end(), 0);
        s.groups.push_back(f);
    }
    if (derivs >= 2) {
        std::vector<int> d;
        for (int i = field_rank; i < s.rank; ++i) d.push_back(i);
        s.groups.push_back(d);
    }
    return s;
}

std::string SymmetryType::key() const {
    std::ostringstream os;
    os << "r" << rank;
    auto dump = [&os](const std::vector<int>& v) {
        os << "(";
        for (int x : v) os << x << ",";
        os << ")";
    };
    os << ";g";
    for (const auto& g : groups) dump(g);
    os << ";v";
    for (const auto& g : vanishing_syms) dump(g);
    os << ";x";
    for (const auto& [a, b] : exchanges) {
        dump(a);
        dump(b);
    }
    return os.str();
}

namespace {

std::size_t pow_sz(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

std::size_t flatten(const std::vector<int>& idx, int dim) {
    std::size_t f = 0;
    for (int v : idx) f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(v);
    return f;
}

void unflatten(std::size_t flat, int dim, std::vector<int>& idx) {
    for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(dim));
        flat /= static_cast<std::size_t>(dim);
    }
}

}  // namespace

SymmetrySubspace::SymmetrySubspace(const SymmetryType& type, int dim) : type_(type), dim_(dim) {
    for (const auto& g : type.groups)
        for (int s : g)
            if (s < 0 || s >= type.rank) throw std::invalid_argument("symmetry group slot out of range");

    const std::size_t total = pow_sz(dim, type.rank);
    // orbit of each component under the product of symmetric groups:
    // canonical representative sorts the indices within each group
    orbit_of_.assign(total, 0);
    std::map<std::size_t, std::size_t> orbit_id;
    std::vector<int> idx(static_cast<std::size_t>(type.rank));
    std::vector<int> canon;
    for (std::size_t f = 0; f < total; ++f) {
        unflatten(f, dim, idx);
        canon = idx;
        for (const auto& g : type.groups) {
            std::vector<int> vals;
            for (int s : g) vals.push_back(canon[static_cast<std::size_t>(s)]);
            std::sort(vals.begin(), vals.end());
            for (std::size_t i = 0; i < g.size(); ++i)
                canon[static_cast<std::size_t>(g[i])] = vals[i];
        }
        std::size_t cf = flatten(canon, dim);
        auto [it, inserted] = orbit_id.try_emplace(cf, orbit_id.size());
        orbit_of_[f] = it->second;
    }
    const std::size_t m0 = orbit_id.size();
    orbit_size_.assign(m0, 0);
    for (std::size_t f = 0; f < total; ++f) orbit_size_[orbit_of_[f]]++;

    // constraint rows over orbit coordinates
    std::vector<Vec> rows;
    std::map<std::string, bool> seen;
    auto push_row = [&](std::map<std::size_t, Rat>& entries) {
        Vec row(m0, Rat(0));
        bool nonzero = false;
        for (auto& [o, c] : entries)
            if (c != 0) {
                row[o] = c;
                nonzero = true;
            }
        if (!nonzero) return;
        std::ostringstream os;
        for (std::size_t j = 0; j < m0; ++j)
            if (row[j] != 0) os << j << ":" << row[j].get_str() << ";";
        if (seen.emplace(os.str(), true).second) rows.push_back(std::move(row));
    };

    std::vector<int> perm_target;
    for (const auto& vs : type.vanishing_syms) {
        std::vector<int> slots = vs;
        std::sort(slots.begin(), slots.end());
        for (std::size_t f = 0; f < total; ++f) {
            unflatten(f, dim, idx);
            std::map<std::size_t, Rat> entries;
            std::vector<int> vals;
            for (int s : slots) vals.push_back(idx[static_cast<std::size_t>(s)]);
            std::sort(vals.begin(), vals.end());
            std::vector<int> arr = vals;
            do {
                canon = idx;
                for (std::size_t i = 0; i < slots.size(); ++i)
                    canon[static_cast<std::size_t>(slots[i])] = arr[i];
                entries[orbit_of_[flatten(canon, dim)]] += 1;
            } while (std::next_permutation(arr.begin(), arr.end()));
            push_row(entries);
        }
    }
    for (const auto& [ga, gb] : type.exchanges) {
        if (ga.size() != gb.size()) throw std::invalid_argument("exchange groups must match in size");
        for (std::size_t f = 0; f < total; ++f) {
            unflatten(f, dim, idx);
            canon = idx;
            for (std::size_t i = 0; i < ga.size(); ++i) {
                canon[static_cast<std::size_t>(ga[i])] = idx[static_cast<std::size_t>(gb[i])];
                canon[static_cast<std::size_t>(gb[i])] = idx[static_cast<std::size_t>(ga[i])];
            }
            std::size_t g = flatten(canon, dim);
            if (orbit_of_[g] == orbit_of_[f]) continue;
            std::map<std::size_t, Rat> entries;
            entries[orbit_of_[f]] += 1;
            entries[orbit_of_[g]] -= 1;
            push_row(entries);
        }
    }

    kernel_ = nullspace(rows, m0);
    // scale every kernel column to integer entries so that integer-coefficient
    // samples have integer components (fast exact evaluation downstream)
    for (Vec& col : kernel_) {
        Int l = 1;
        for (const Rat& q : col) {
            Int den = q.get_den();
            Int g;
            mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
            l = l * den / g;
        }
        if (l != 1)
            for (Rat& q : col) q *= Rat(l);
    }

    if (!kernel_.empty()) {
        // Gram matrix K^T D K of the admissible basis (D = orbit sizes)
        const std::size_t m = kernel_.size();
        Mat gram(m, Vec(m, Rat(0)));
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a; b < m; ++b) {
                Rat acc = 0;
                for (std::size_t o = 0; o < m0; ++o)
                    if (kernel_[a][o] != 0 && kernel_[b][o] != 0)
                        acc += Rat(orbit_size_[o]) * kernel_[a][o] * kernel_[b][o];
                gram[a][b] = acc;
                gram[b][a] = acc;
            }
        gram_inv_ = invert(std::move(gram));
    }
}

DenseTensor SymmetrySubspace::random(Rng& rng, Var v) const {
    DenseTensor t = DenseTensor::zeros(dim_, type_.rank, v);
    if (empty()) return t;
    const std::size_t m0 = orbit_size_.size();
    Vec y(m0, Rat(0));
    for (const Vec& col : kernel_) {
        // integer coefficients over integer-scaled columns keep every
        // component an integer
        Rat c = Rat(rng.uniform(-6, 6));
        if (c == 0) continue;
        for (std::size_t o = 0; o < m0; ++o)
            if (col[o] != 0) y[o] += c * col[o];
    }
    for (std::size_t f = 0; f < t.size(); ++f) t[f] = y[orbit_of_[f]];
    return t;
}

DenseTensor SymmetrySubspace::project(const DenseTensor& t) const {
    if (t.rank() != type_.rank || t.dim() != dim_)
        throw std::invalid_argument("project: tensor shape does not match symmetry type");
    if (empty()) return DenseTensor(dim_, t.variance());  // zero tensor
    const std::size_t m0 = orbit_size_.size();
    const std::size_t m = kernel_.size();
    // s = V0^T t
    Vec s(m0, Rat(0));
    for (std::size_t f = 0; f < t.size(); ++f) s[orbit_of_[f]] += t[f];
    // b = K^T s
    Vec b(m, Rat(0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t o = 0; o < m0; ++o)
            if (kernel_[a][o] != 0 && s[o] != 0) b[a] += kernel_[a][o] * s[o];
    Vec x = mat_vec(gram_inv_, b);
    Vec y(m0, Rat(0));
    for (std::size_t a = 0; a < m; ++a) {
        if (x[a] == 0) continue;
        for (std::size_t o = 0; o < m0; ++o)
            if (kernel_[a][o] != 0) y[o] += x[a] * kernel_[a][o];
    }
    DenseTensor out(dim_, t.variance());
    for (std::size_t f = 0; f < out.size(); ++f) out[f] = y[orbit_of_[f]];
    return out;
}

bool SymmetrySubspace::contains(const DenseTensor& t) const { return project(t) == t; }

const SymmetrySubspace& symmetry_subspace(const SymmetryType& type, int dim) {
    static std::mutex mu;
    static std::map<std::pair<std::string, int>, std::unique_ptr<SymmetrySubspace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto k = std::make_pair(type.key(), dim);
    auto it = cache.find(k);
    if (it == cache.end())
        it = cache.emplace(k, std::make_unique<SymmetrySubspace>(type, dim)).first;
    return *it->second;
}

DenseTensor random_in_symmetry(const SymmetryType& s, int dim, std::uint64_t seed, Var v) {
    Rng rng(seed);
    return symmetry_subspace(s, dim).random(rng, v);
}

ProjectionResult project_symmetry(const DenseTensor& t, const SymmetryType& s) {
    const SymmetrySubspace& sub = symmetry_subspace(s, t.dim());
    if (t.rank() != s.rank) throw std::invalid_argument("project_symmetry: rank mismatch");
    return ProjectionResult{sub.project(t), sub.empty()};
}

}  // namespace wickgen
