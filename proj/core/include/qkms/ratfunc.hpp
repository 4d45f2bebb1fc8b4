#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qkms/laurent.hpp"
#include "qkms/zpoly.hpp"

namespace qkms {

/// Rational function in q over Q, stored as a reduced fraction of
/// integer-coefficient polynomials; den is primitive with positive lead.
class RatFunc {
public:
    RatFunc() : num_(), den_(1) {}
    RatFunc(long long c) : num_(c), den_(1) {}
    RatFunc(Int c) : num_(std::move(c)), den_(1) {}
    RatFunc(const Rat& c) : num_(numerator(c)), den_(denominator(c)) {}
    RatFunc(ZPoly num, ZPoly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }
    explicit RatFunc(ZPoly num) : num_(std::move(num)), den_(1) {}

    static RatFunc q_pow(int e) {
        if (e >= 0) return RatFunc(ZPoly::monomial(static_cast<unsigned>(e)));
        return RatFunc(ZPoly(1), ZPoly::monomial(static_cast<unsigned>(-e)));
    }
    static RatFunc from_laurent(const Laurent& x) {
        int shift = x.min_exp() < 0 ? -x.min_exp() : 0;
        ZPoly num;
        for (const auto& [e, c] : x.terms())
            num += ZPoly::monomial(static_cast<unsigned>(e + shift), c);
        return RatFunc(std::move(num), ZPoly::monomial(static_cast<unsigned>(shift)));
    }

    const ZPoly& num() const { return num_; }
    const ZPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }

    RatFunc operator-() const { RatFunc r = *this; r.num_ = -r.num_; return r; }
    RatFunc operator+(const RatFunc& o) const {
        return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator-(const RatFunc& o) const {
        return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }
    RatFunc operator/(const RatFunc& o) const {
        if (o.is_zero()) throw std::domain_error("RatFunc: division by zero");
        return RatFunc(num_ * o.den_, den_ * o.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { *this = *this + o; return *this; }
    RatFunc& operator-=(const RatFunc& o) { *this = *this - o; return *this; }
    RatFunc& operator*=(const RatFunc& o) { *this = *this * o; return *this; }
    RatFunc& operator/=(const RatFunc& o) { *this = *this / o; return *this; }
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    Rat eval(const Rat& x) const {
        Rat d = den_.eval(x);
        if (d == 0) throw std::domain_error("RatFunc: pole at evaluation point");
        return num_.eval(x) / d;
    }

    /// If this is a Laurent polynomial (den = +-q^k), return it.
    std::optional<Laurent> as_laurent() const;

    std::string str() const {
        if (den_ == ZPoly(1)) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    void reduce();
    ZPoly num_, den_;
};

/// Element of Q(q)^pi via the idempotent split at pi = +1 / -1.
/// x = ev + od*pi corresponds to (plus, minus) = (ev+od, ev-od).
struct RatFuncPi {
    RatFunc plus, minus;

    RatFuncPi() = default;
    RatFuncPi(long long c) : plus(c), minus(c) {}
    RatFuncPi(const Rat& c) : plus(c), minus(c) {}
    RatFuncPi(RatFunc p, RatFunc m) : plus(std::move(p)), minus(std::move(m)) {}

    static RatFuncPi pi() { return RatFuncPi(RatFunc(1), RatFunc(-1)); }
    static RatFuncPi from_laurent(const LaurentPi& x) {
        return RatFuncPi(RatFunc::from_laurent(specialize_pi(x, +1)),
                         RatFunc::from_laurent(specialize_pi(x, -1)));
    }

    bool is_zero() const { return plus.is_zero() && minus.is_zero(); }
    bool is_one() const { return plus.is_one() && minus.is_one(); }
    /// Invertible in Q(q)^pi iff both components are nonzero.
    bool is_unit() const { return !plus.is_zero() && !minus.is_zero(); }

    RatFuncPi operator-() const { return RatFuncPi(-plus, -minus); }
    RatFuncPi operator+(const RatFuncPi& o) const { return {plus + o.plus, minus + o.minus}; }
    RatFuncPi operator-(const RatFuncPi& o) const { return {plus - o.plus, minus - o.minus}; }
    RatFuncPi operator*(const RatFuncPi& o) const { return {plus * o.plus, minus * o.minus}; }
    RatFuncPi operator/(const RatFuncPi& o) const {
        if (!o.is_unit()) throw std::domain_error("RatFuncPi: divisor not invertible");
        return {plus / o.plus, minus / o.minus};
    }
    RatFuncPi& operator+=(const RatFuncPi& o) { *this = *this + o; return *this; }
    RatFuncPi& operator-=(const RatFuncPi& o) { *this = *this - o; return *this; }
    RatFuncPi& operator*=(const RatFuncPi& o) { *this = *this * o; return *this; }
    RatFuncPi& operator/=(const RatFuncPi& o) { *this = *this / o; return *this; }
    bool operator==(const RatFuncPi& o) const { return plus == o.plus && minus == o.minus; }
    bool operator!=(const RatFuncPi& o) const { return !(*this == o); }

    RatFuncPi mul_pi() const { return {plus, -minus}; }

    /// Reconstructed pi-even / pi-odd parts (may have half-integral data,
    /// hence returned at the rational-function level).
    RatFunc even_part() const { return (plus + minus) / RatFunc(2); }
    RatFunc odd_part() const { return (plus - minus) / RatFunc(2); }

    /// If both components are Laurent with integral recombination, the
    /// element lies in A^pi; reconstruct it.
    std::optional<LaurentPi> as_laurent_pi() const;

    std::string str() const { return "[" + plus.str() + " ; " + minus.str() + "]"; }
};

/// Element of Q(q)^{sqrt(pi)}: ev + od*sqrt(pi) with ev, od in Q(q)^pi.
struct RatFuncSqrt {
    RatFuncPi ev, od;

    RatFuncSqrt() = default;
    RatFuncSqrt(long long c) : ev(c) {}
    RatFuncSqrt(const Rat& c) : ev(c) {}
    RatFuncSqrt(RatFuncPi e) : ev(std::move(e)) {}
    RatFuncSqrt(RatFuncPi e, RatFuncPi o) : ev(std::move(e)), od(std::move(o)) {}

    static RatFuncSqrt sqrt_pi() { return RatFuncSqrt(RatFuncPi(0), RatFuncPi(1)); }
    static RatFuncSqrt from_laurent(const LaurentSqrt& x) {
        LaurentPi e = x.map_coeffs([](const SqrtPiScalar& c) { return c.even_part(); });
        LaurentPi o = x.map_coeffs([](const SqrtPiScalar& c) { return c.odd_part(); });
        return RatFuncSqrt(RatFuncPi::from_laurent(e), RatFuncPi::from_laurent(o));
    }

    bool is_zero() const { return ev.is_zero() && od.is_zero(); }
    bool is_pi_elt() const { return od.is_zero(); }
    RatFuncPi as_pi_elt() const {
        if (!is_pi_elt()) throw std::domain_error("element has a sqrt(pi) component");
        return ev;
    }

    RatFuncSqrt operator-() const { return {-ev, -od}; }
    RatFuncSqrt operator+(const RatFuncSqrt& o) const { return {ev + o.ev, od + o.od}; }
    RatFuncSqrt operator-(const RatFuncSqrt& o) const { return {ev - o.ev, od - o.od}; }
    RatFuncSqrt operator*(const RatFuncSqrt& o) const {
        // (a + b s)(c + d s) = (ac + bd*pi) + (ad + bc) s,  s^2 = pi
        return {ev * o.ev + (od * o.od).mul_pi(), ev * o.od + od * o.ev};
    }
    RatFuncSqrt inverse() const {
        // 1/(a + b s) = (a - b s)/(a^2 - pi b^2)
        RatFuncPi nrm = ev * ev - (od * od).mul_pi();
        if (!nrm.is_unit()) throw std::domain_error("RatFuncSqrt: not invertible");
        return {ev / nrm, -(od / nrm)};
    }
    RatFuncSqrt operator/(const RatFuncSqrt& o) const { return *this * o.inverse(); }
    RatFuncSqrt& operator+=(const RatFuncSqrt& o) { *this = *this + o; return *this; }
    RatFuncSqrt& operator-=(const RatFuncSqrt& o) { *this = *this - o; return *this; }
    RatFuncSqrt& operator*=(const RatFuncSqrt& o) { *this = *this * o; return *this; }
    RatFuncSqrt& operator/=(const RatFuncSqrt& o) { *this = *this / o; return *this; }
    bool operator==(const RatFuncSqrt& o) const { return ev == o.ev && od == o.od; }
    bool operator!=(const RatFuncSqrt& o) const { return !(*this == o); }

    std::string str() const {
        if (od.is_zero()) return ev.str();
        return ev.str() + " + s*" + od.str();
    }
};

}  // namespace qkms
