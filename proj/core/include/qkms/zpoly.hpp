#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkms/ints.hpp"

namespace qkms {

/// Dense polynomial over Z, coefficients constant-term first.
/// Normalized: no trailing (leading-degree) zeros; empty vector is 0.
class ZPoly {
public:
    ZPoly() = default;
    ZPoly(long long c) { if (c != 0) c_.push_back(Int(c)); }
    ZPoly(Int c) { if (c != 0) c_.push_back(std::move(c)); }
    explicit ZPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

    static ZPoly monomial(unsigned deg, Int c = Int(1)) {
        ZPoly p;
        if (c != 0) {
            p.c_.assign(deg + 1, Int(0));
            p.c_.back() = std::move(c);
        }
        return p;
    }

    const std::vector<Int>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for 0
    const Int& lead() const { return c_.back(); }
    Int coeff(size_t k) const { return k < c_.size() ? c_[k] : Int(0); }

    ZPoly operator-() const;
    ZPoly operator+(const ZPoly& o) const;
    ZPoly operator-(const ZPoly& o) const;
    ZPoly operator*(const ZPoly& o) const;
    ZPoly& operator+=(const ZPoly& o) { *this = *this + o; return *this; }
    ZPoly& operator-=(const ZPoly& o) { *this = *this - o; return *this; }
    ZPoly& operator*=(const ZPoly& o) { *this = *this * o; return *this; }
    bool operator==(const ZPoly& o) const { return c_ == o.c_; }
    bool operator!=(const ZPoly& o) const { return !(*this == o); }

    Int content() const;
    ZPoly primitive() const;  // content divided out, lead > 0; 0 -> 0
    ZPoly scaled(const Int& s) const;
    std::optional<ZPoly> try_div_exact(const ZPoly& d) const;
    Rat eval(const Rat& x) const;

    std::string str(const char* var = "q") const;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Int> c_;
};

ZPoly zpoly_gcd(const ZPoly& a, const ZPoly& b);

}  // namespace qkms
