#include "wickgen/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "wickgen/linalg.hpp"

namespace wickgen {

namespace {
std::size_t pow_sz(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}
}  // namespace

DenseTensor::DenseTensor(int dim, std::vector<Var> variance)
    : dim_(dim), variance_(std::move(variance)) {
    if (dim < 1) throw std::invalid_argument("tensor dimension must be >= 1");
    comps_.assign(pow_sz(dim_, rank()), Rat(0));
}

DenseTensor DenseTensor::scalar(const Rat& value, int dim) {
    DenseTensor t(dim, {});
    t.comps_[0] = value;
    return t;
}

DenseTensor DenseTensor::zeros(int dim, int rank, Var v) {
    return DenseTensor(dim, std::vector<Var>(static_cast<std::size_t>(rank), v));
}

DenseTensor DenseTensor::kronecker(int dim) {
    DenseTensor t(dim, {Var::Contra, Var::Co});
    for (int i = 0; i < dim; ++i) t.at({i, i}) = 1;
    return t;
}

DenseTensor DenseTensor::minkowski(int dim, Var v) {
    DenseTensor t(dim, {v, v});
    t.at({0, 0}) = -1;
    for (int i = 1; i < dim; ++i) t.at({i, i}) = 1;
    return t;
}

DenseTensor DenseTensor::levi_civita(int dim, Var v) {
    DenseTensor t = zeros(dim, dim, v);
    std::vector<int> idx(static_cast<std::size_t>(dim));
    std::iota(idx.begin(), idx.end(), 0);
    do {
        int sign = 1;
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = i + 1; j < idx.size(); ++j)
                if (idx[i] > idx[j]) sign = -sign;
        t.at(idx) = sign;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return t;
}

std::size_t DenseTensor::flatten(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw std::invalid_argument("index rank mismatch");
    std::size_t flat = 0;
    for (int v : idx) {
        if (v < 0 || v >= dim_) throw std::out_of_range("index out of range");
        flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(v);
    }
    return flat;
}

void DenseTensor::unflatten(std::size_t flat, std::span<int> idx) const {
    for (int k = rank() - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
        flat /= static_cast<std::size_t>(dim_);
    }
}

bool DenseTensor::operator==(const DenseTensor& o) const {
    return dim_ == o.dim_ && variance_ == o.variance_ && comps_ == o.comps_;
}

bool DenseTensor::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const Rat& q) { return q == 0; });
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& o) {
    if (dim_ != o.dim_ || variance_ != o.variance_)
        throw std::invalid_argument("tensor shape mismatch in addition");
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
    return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& o) {
    if (dim_ != o.dim_ || variance_ != o.variance_)
        throw std::invalid_argument("tensor shape mismatch in subtraction");
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
    return *this;
}

DenseTensor& DenseTensor::operator*=(const Rat& c) {
    for (Rat& q : comps_) q *= c;
    return *this;
}

DenseTensor DenseTensor::outer(const DenseTensor& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("tensor dimension mismatch in product");
    std::vector<Var> var = variance_;
    var.insert(var.end(), o.variance_.begin(), o.variance_.end());
    DenseTensor r(dim_, std::move(var));
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (comps_[i] == 0) continue;
        for (std::size_t j = 0; j < o.comps_.size(); ++j)
            r.comps_[i * o.comps_.size() + j] = comps_[i] * o.comps_[j];
    }
    return r;
}

DenseTensor DenseTensor::contract_pair(int slot_a, int slot_b) const {
    if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= rank() || slot_b >= rank())
        throw std::invalid_argument("bad contraction slots");
    if (variance_[static_cast<std::size_t>(slot_a)] == variance_[static_cast<std::size_t>(slot_b)])
        throw std::invalid_argument("contraction requires opposite variance");
    std::vector<Var> var;
    for (int s = 0; s < rank(); ++s)
        if (s != slot_a && s != slot_b) var.push_back(variance_[static_cast<std::size_t>(s)]);
    DenseTensor r(dim_, std::move(var));
    std::vector<int> full(static_cast<std::size_t>(rank()));
    for (IndexIter it(dim_, r.rank()); !it.done(); it.advance()) {
        std::span<const int> out = *it;
        std::size_t k = 0;
        for (int s = 0; s < rank(); ++s)
            if (s != slot_a && s != slot_b) full[static_cast<std::size_t>(s)] = out[k++];
        Rat acc = 0;
        for (int d = 0; d < dim_; ++d) {
            full[static_cast<std::size_t>(slot_a)] = d;
            full[static_cast<std::size_t>(slot_b)] = d;
            acc += at(full);
        }
        r.at(out) = acc;
    }
    return r;
}

DenseTensor DenseTensor::permuted(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != rank()) throw std::invalid_argument("bad permutation");
    std::vector<Var> var(static_cast<std::size_t>(rank()));
    for (int s = 0; s < rank(); ++s)
        var[static_cast<std::size_t>(s)] = variance_[static_cast<std::size_t>(perm[s])];
    DenseTensor r(dim_, std::move(var));
    std::vector<int> src(static_cast<std::size_t>(rank()));
    for (IndexIter it(dim_, rank()); !it.done(); it.advance()) {
        std::span<const int> dst = *it;
        for (int s = 0; s < rank(); ++s) src[static_cast<std::size_t>(perm[s])] = dst[s];
        r.at(dst) = at(src);
    }
    return r;
}

DenseTensor DenseTensor::symmetrized() const {
    std::vector<int> slots(static_cast<std::size_t>(rank()));
    std::iota(slots.begin(), slots.end(), 0);
    return symmetrized_over(slots);
}

DenseTensor DenseTensor::symmetrized_over(std::span<const int> slots) const {
    for (std::size_t i = 1; i < slots.size(); ++i)
        if (variance_[static_cast<std::size_t>(slots[i])] !=
            variance_[static_cast<std::size_t>(slots[0])])
            throw std::invalid_argument("cannot symmetrize slots of mixed variance");
    std::vector<int> perm(static_cast<std::size_t>(rank()));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> group(slots.begin(), slots.end());
    std::sort(group.begin(), group.end());
    DenseTensor acc(dim_, variance_);
    std::vector<int> arrangement = group;
    bool first = true;
    long count = 0;
    do {
        for (std::size_t i = 0; i < group.size(); ++i)
            perm[static_cast<std::size_t>(group[i])] = arrangement[i];
        if (first) {
            acc = permuted(perm);
            first = false;
        } else {
            acc += permuted(perm);
        }
        ++count;
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    acc *= Rat(1, count);
    return acc;
}

bool DenseTensor::is_symmetric() const {
    if (rank() < 2) return true;
    // generated by adjacent transpositions
    std::vector<int> perm(static_cast<std::size_t>(rank()));
    for (int s = 0; s + 1 < rank(); ++s) {
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[static_cast<std::size_t>(s)], perm[static_cast<std::size_t>(s) + 1]);
        if (!(permuted(perm) == *this)) return false;
    }
    return true;
}

DenseTensor sym_product(const DenseTensor& a, const DenseTensor& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("sym_product: dimension mismatch");
    Var common = a.rank() > 0 ? a.variance()[0] : (b.rank() > 0 ? b.variance()[0] : Var::Contra);
    for (Var v : a.variance())
        if (v != common) throw std::invalid_argument("sym_product: variance mismatch");
    for (Var v : b.variance())
        if (v != common) throw std::invalid_argument("sym_product: variance mismatch");
    return a.outer(b).symmetrized();
}

DenseTensor contract_l(const DenseTensor& g, const DenseTensor& f, int l) {
    if (g.dim() != f.dim()) throw std::invalid_argument("contract_l: dimension mismatch");
    if (l != g.rank()) throw std::invalid_argument("contract_l: l must equal rank of g");
    if (l > f.rank()) throw std::invalid_argument("contract_l: l exceeds rank of f");
    for (Var v : g.variance())
        if (v != Var::Co) throw std::invalid_argument("contract_l: g must be covariant");
    for (Var v : f.variance())
        if (v != Var::Contra) throw std::invalid_argument("contract_l: f must be contravariant");
    if (!g.is_symmetric() || !f.is_symmetric())
        throw std::invalid_argument("contract_l: inputs must be fully symmetric");

    const int k = f.rank();
    DenseTensor r = DenseTensor::zeros(f.dim(), k - l, Var::Contra);
    std::vector<int> full(static_cast<std::size_t>(k));
    const Rat coef(binomial(k, l));
    for (IndexIter out(f.dim(), k - l); !out.done(); out.advance()) {
        std::span<const int> oid = *out;
        for (int s = l; s < k; ++s) full[static_cast<std::size_t>(s)] = oid[static_cast<std::size_t>(s - l)];
        Rat acc = 0;
        for (IndexIter in(f.dim(), l); !in.done(); in.advance()) {
            std::span<const int> iid = *in;
            const Rat& gv = g.at(iid);
            if (gv == 0) continue;
            for (int s = 0; s < l; ++s) full[static_cast<std::size_t>(s)] = iid[s];
            acc += gv * f.at(full);
        }
        r.at(oid) = coef * acc;
    }
    return r;
}

namespace {
// apply matrix to a single slot
DenseTensor apply_slot(const DenseTensor& t, const std::vector<std::vector<Rat>>& m, int slot) {
    DenseTensor r = DenseTensor(t.dim(), t.variance());
    std::vector<int> src(static_cast<std::size_t>(t.rank()));
    for (IndexIter it(t.dim(), t.rank()); !it.done(); it.advance()) {
        std::span<const int> dst = *it;
        std::copy(dst.begin(), dst.end(), src.begin());
        Rat acc = 0;
        for (int j = 0; j < t.dim(); ++j) {
            const Rat& c = m[static_cast<std::size_t>(dst[static_cast<std::size_t>(slot)])]
                            [static_cast<std::size_t>(j)];
            if (c == 0) continue;
            src[static_cast<std::size_t>(slot)] = j;
            acc += c * t.at(src);
        }
        r.at(dst) = acc;
    }
    return r;
}
}  // namespace

DenseTensor transform(const DenseTensor& t, const std::vector<std::vector<Rat>>& u,
                      const Rat& density_weight) {
    if (static_cast<int>(u.size()) != t.dim()) throw std::invalid_argument("transform: matrix size");
    Rat d = det(u);
    if (d == 0) throw std::invalid_argument("transform: singular matrix");
    Rat abs_det = d < 0 ? Rat(-d) : d;
    if (density_weight != 0 && abs_det != 1)
        throw std::invalid_argument("transform: nonzero density weight requires |det u| = 1");

    std::vector<std::vector<Rat>> uinv_t;  // inverse transpose, for covariant slots
    bool need_co = false;
    for (Var v : t.variance()) need_co = need_co || (v == Var::Co);
    if (need_co) {
        auto inv = invert(u);
        uinv_t.assign(u.size(), std::vector<Rat>(u.size()));
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < u.size(); ++j) uinv_t[i][j] = inv[j][i];
    }

    DenseTensor r = t;
    for (int s = 0; s < t.rank(); ++s)
        r = apply_slot(r, t.variance()[static_cast<std::size_t>(s)] == Var::Contra ? u : uinv_t, s);
    // |det u|^w with |det u| = 1 is identically 1; weight 0 likewise
    return r;
}

std::optional<Rat> pow_rat_exact(const Rat& q, const Rat& exponent) {
    if (is_integer(exponent)) return pow_rat(q, to_long(exponent));
    if (q <= 0) return std::nullopt;
    long den = to_long(Rat(exponent.get_den()));
    long num = to_long(Rat(exponent.get_num()));
    // q^(num/den): need an exact den-th root of q first
    mpz_class rn, rd;
    if (!mpz_root(rn.get_mpz_t(), q.get_num().get_mpz_t(), static_cast<unsigned long>(den)))
        return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), q.get_den().get_mpz_t(), static_cast<unsigned long>(den)))
        return std::nullopt;
    Rat root(rn, rd);
    root.canonicalize();
    return pow_rat(root, num);
}

}  // namespace wickgen
