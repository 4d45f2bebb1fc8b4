#include "qkms/zpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace qkms {

ZPoly ZPoly::operator-() const {
    ZPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

ZPoly ZPoly::operator+(const ZPoly& o) const {
    std::vector<Int> v(std::max(c_.size(), o.c_.size()), Int(0));
    for (size_t k = 0; k < c_.size(); ++k) v[k] = c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) v[k] += o.c_[k];
    return ZPoly(std::move(v));
}

ZPoly ZPoly::operator-(const ZPoly& o) const {
    std::vector<Int> v(std::max(c_.size(), o.c_.size()), Int(0));
    for (size_t k = 0; k < c_.size(); ++k) v[k] = c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) v[k] -= o.c_[k];
    return ZPoly(std::move(v));
}

ZPoly ZPoly::operator*(const ZPoly& o) const {
    if (is_zero() || o.is_zero()) return ZPoly{};
    std::vector<Int> v(c_.size() + o.c_.size() - 1, Int(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    }
    return ZPoly(std::move(v));
}

Int ZPoly::content() const {
    Int g = 0;
    for (const auto& c : c_) g = int_gcd(g, c);
    return g;
}

ZPoly ZPoly::primitive() const {
    if (is_zero()) return ZPoly{};
    Int g = content();
    if (lead() < 0) g = -g;
    ZPoly r = *this;
    for (auto& c : r.c_) c /= g;
    return r;
}

ZPoly ZPoly::scaled(const Int& s) const {
    if (s == 0) return ZPoly{};
    ZPoly r = *this;
    for (auto& c : r.c_) c *= s;
    return r;
}

std::optional<ZPoly> ZPoly::try_div_exact(const ZPoly& d) const {
    if (d.is_zero()) return std::nullopt;
    if (is_zero()) return ZPoly{};
    if (c_.size() < d.c_.size()) return std::nullopt;
    std::vector<Int> rem = c_;
    std::vector<Int> quot(c_.size() - d.c_.size() + 1, Int(0));
    const Int& dl = d.lead();
    for (int k = static_cast<int>(quot.size()) - 1; k >= 0; --k) {
        Int top = rem[static_cast<size_t>(k) + d.c_.size() - 1];
        if (top == 0) continue;
        if (top % dl != 0) return std::nullopt;
        Int q = top / dl;
        quot[static_cast<size_t>(k)] = q;
        for (size_t j = 0; j < d.c_.size(); ++j)
            rem[static_cast<size_t>(k) + j] -= q * d.c_[j];
    }
    for (const auto& c : rem)
        if (c != 0) return std::nullopt;
    return ZPoly(std::move(quot));
}

Rat ZPoly::eval(const Rat& x) const {
    Rat r = 0;
    for (size_t k = c_.size(); k-- > 0;) r = r * x + Rat(c_[k]);
    return r;
}

std::string ZPoly::str(const char* var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        if (!first && c_[k] > 0) os << "+";
        if (k == 0) os << c_[k];
        else {
            if (c_[k] == -1) os << "-";
            else if (c_[k] != 1) os << c_[k] << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
        first = false;
    }
    return os.str();
}

namespace {

// Pseudo-remainder sequence step, exact over Z.
ZPoly prem(ZPoly f, const ZPoly& d) {
    const Int& dl = d.lead();
    while (!f.is_zero() && f.degree() >= d.degree()) {
        int shift = f.degree() - d.degree();
        Int fl = f.lead();
        f = f.scaled(dl) - d * ZPoly::monomial(static_cast<unsigned>(shift), fl);
    }
    return f;
}

}  // namespace

ZPoly zpoly_gcd(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero()) {
        if (b.is_zero()) return ZPoly{};
        return b.lead() < 0 ? -b : b;
    }
    if (b.is_zero()) return a.lead() < 0 ? -a : a;
    Int cg = int_gcd(a.content(), b.content());
    ZPoly f = a.primitive(), g = b.primitive();
    while (!g.is_zero()) {
        ZPoly r = prem(f, g).primitive();
        f = g;
        g = r;
    }
    return f.scaled(cg);
}

}  // namespace qkms
