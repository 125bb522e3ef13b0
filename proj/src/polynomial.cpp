#include "wickgen/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace wickgen {

namespace {
const Rat kZero(0);
}

const Rat& Poly::coeff(int k) const {
    if (k < 0 || k > degree()) return kZero;
    return c_[static_cast<std::size_t>(k)];
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rat Poly::eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rat> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = Rat(static_cast<long>(k)) * c_[k];
    return Poly(std::move(d));
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return *this * (1 / lead());
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return Poly(std::move(r));
}

Poly Poly::operator*(const Rat& c) const {
    std::vector<Rat> r = c_;
    for (Rat& q : r) q *= c;
    return Poly(std::move(r));
}

Poly Poly::rem(const Poly& divisor) const {
    if (divisor.is_zero()) throw std::invalid_argument("polynomial division by zero");
    std::vector<Rat> r = c_;
    const int dd = divisor.degree();
    while (static_cast<int>(r.size()) - 1 >= dd) {
        Rat f = r.back() / divisor.lead();
        std::size_t shift = r.size() - 1 - static_cast<std::size_t>(dd);
        for (int k = 0; k <= dd; ++k)
            r[shift + static_cast<std::size_t>(k)] -= f * divisor.coeff(k);
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (r.empty()) break;
    }
    return Poly(std::move(r));
}

Poly Poly::quot(const Poly& divisor) const {
    if (divisor.is_zero()) throw std::invalid_argument("polynomial division by zero");
    std::vector<Rat> r = c_;
    if (degree() < divisor.degree()) return Poly();
    std::vector<Rat> q(static_cast<std::size_t>(degree() - divisor.degree()) + 1, Rat(0));
    const int dd = divisor.degree();
    while (static_cast<int>(r.size()) - 1 >= dd && !r.empty()) {
        Rat f = r.back() / divisor.lead();
        std::size_t shift = r.size() - 1 - static_cast<std::size_t>(dd);
        q[shift] = f;
        for (int k = 0; k <= dd; ++k)
            r[shift + static_cast<std::size_t>(k)] -= f * divisor.coeff(k);
        while (!r.empty() && r.back() == 0) r.pop_back();
    }
    return Poly(std::move(q));
}

Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a.rem(b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

namespace {
std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    chain.push_back(p);
    chain.push_back(p.derivative());
    while (!chain.back().is_zero()) {
        Poly r = chain[chain.size() - 2].rem(chain.back());
        chain.push_back(r * Rat(-1));
    }
    chain.pop_back();
    return chain;
}

int sign_changes(const std::vector<Poly>& chain, const Rat& x) {
    int changes = 0, last = 0;
    for (const Poly& p : chain) {
        Rat v = p.eval(x);
        int s = v == 0 ? 0 : (v < 0 ? -1 : 1);
        if (s != 0) {
            if (last != 0 && s != last) ++changes;
            last = s;
        }
    }
    return changes;
}
}  // namespace

int sturm_count(const Poly& p, const Rat& lo, const Rat& hi) {
    if (p.is_zero()) throw std::invalid_argument("sturm_count of zero polynomial");
    auto chain = sturm_chain(p);
    return sign_changes(chain, lo) - sign_changes(chain, hi);
}

Rat root_bound(const Poly& p) {
    Rat b = 0;
    for (int k = 0; k < p.degree(); ++k) {
        Rat q = p.coeff(k) / p.lead();
        if (q < 0) q = -q;
        if (q > b) b = q;
    }
    return b + 1;
}

int sturm_count_all(const Poly& p) {
    Rat b = root_bound(p);
    return sturm_count(p, -b, b);
}

std::vector<std::pair<Rat, Rat>> isolate_real_roots(const Poly& p) {
    std::vector<std::pair<Rat, Rat>> out;
    if (p.degree() <= 0) return out;
    Rat b = root_bound(p);
    std::vector<std::pair<Rat, Rat>> work{{-b, b}};
    while (!work.empty()) {
        auto [lo, hi] = work.back();
        work.pop_back();
        int cnt = sturm_count(p, lo, hi);
        if (cnt == 0) continue;
        if (cnt == 1) {
            out.emplace_back(lo, hi);
            continue;
        }
        Rat mid = (lo + hi) / 2;
        work.emplace_back(mid, hi);
        work.emplace_back(lo, mid);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b2) { return a.first < b2.first; });
    return out;
}

std::pair<Rat, Rat> refine_interval(const Poly& p, std::pair<Rat, Rat> iv, const Rat& eps) {
    while (iv.second - iv.first > eps) {
        Rat mid = (iv.first + iv.second) / 2;
        if (sturm_count(p, iv.first, mid) == 1)
            iv.second = mid;
        else
            iv.first = mid;
    }
    return iv;
}

int sign_at_root(const Poly& p, std::pair<Rat, Rat> iv, const Poly& q) {
    if (q.is_zero()) return 0;
    // if q shares the root, the sign is zero
    Poly g = gcd(p, q);
    if (g.degree() >= 1 && sturm_count(g, iv.first, iv.second) > 0) return 0;
    // otherwise shrink until q has no root inside, then evaluate at an endpoint
    while (sturm_count(q, iv.first, iv.second) > 0) {
        Rat mid = (iv.first + iv.second) / 2;
        if (sturm_count(p, iv.first, mid) == 1)
            iv.second = mid;
        else
            iv.first = mid;
    }
    Rat v = q.eval(iv.second);
    return v == 0 ? 0 : (v < 0 ? -1 : 1);
}

}  // namespace wickgen
