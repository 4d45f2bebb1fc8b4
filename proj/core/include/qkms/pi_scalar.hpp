#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "qkms/ints.hpp"

namespace qkms {

/// Element of Z[pi] with pi^2 = 1, stored as ev + od*pi.
struct PiScalar {
    Int ev{0};
    Int od{0};

    PiScalar() = default;
    PiScalar(Int e) : ev(std::move(e)) {}
    PiScalar(long long e) : ev(e) {}
    PiScalar(Int e, Int o) : ev(std::move(e)), od(std::move(o)) {}

    static PiScalar pi() { return PiScalar(Int(0), Int(1)); }
    /// pi^k for k >= 0 (pi^2 = 1, so only parity of k matters).
    static PiScalar pi_pow(long long k) {
        return ((k % 2 + 2) % 2) ? pi() : PiScalar(1);
    }

    bool is_zero() const { return ev == 0 && od == 0; }
    bool is_one() const { return ev == 1 && od == 0; }

    PiScalar operator-() const { return PiScalar(-ev, -od); }
    PiScalar operator+(const PiScalar& o) const { return PiScalar(ev + o.ev, od + o.od); }
    PiScalar operator-(const PiScalar& o) const { return PiScalar(ev - o.ev, od - o.od); }
    PiScalar operator*(const PiScalar& o) const {
        return PiScalar(ev * o.ev + od * o.od, ev * o.od + od * o.ev);
    }
    PiScalar& operator+=(const PiScalar& o) { ev += o.ev; od += o.od; return *this; }
    PiScalar& operator-=(const PiScalar& o) { ev -= o.ev; od -= o.od; return *this; }
    PiScalar& operator*=(const PiScalar& o) { *this = *this * o; return *this; }
    bool operator==(const PiScalar& o) const { return ev == o.ev && od == o.od; }
    bool operator!=(const PiScalar& o) const { return !(*this == o); }

    /// Ring map pi -> sign (+1 or -1).
    Int specialize(int sign) const {
        if (sign >= 0) return ev + od;
        return ev - od;
    }

    /// Exact division in Z[pi]; empty if the quotient does not exist.
    std::optional<PiScalar> try_div(const PiScalar& d) const {
        Int dp = d.ev + d.od, dm = d.ev - d.od;
        if (dp == 0 || dm == 0) return std::nullopt;
        Int np = ev + od, nm = ev - od;
        if (np % dp != 0 || nm % dm != 0) return std::nullopt;
        Int qp = np / dp, qm = nm / dm;
        if ((qp - qm) % 2 != 0) return std::nullopt;
        return PiScalar((qp + qm) / 2, (qp - qm) / 2);
    }

    std::string str() const {
        std::ostringstream os;
        if (od == 0) { os << ev; return os.str(); }
        if (ev != 0) os << ev << (od > 0 ? "+" : "");
        if (od == 1) os << "pi";
        else if (od == -1) os << "-pi";
        else os << od << "*pi";
        return os.str();
    }
};

inline std::ostream& operator<<(std::ostream& os, const PiScalar& s) { return os << s.str(); }

/// Element of Z[sqrt(pi)]: group ring of Z/4 on the basis
/// 1, s, s^2, s^3 with s = sqrt(pi), s^2 = pi, s^4 = 1.
struct SqrtPiScalar {
    std::array<Int, 4> c{};

    SqrtPiScalar() = default;
    SqrtPiScalar(Int e) { c[0] = std::move(e); }
    SqrtPiScalar(long long e) { c[0] = e; }
    SqrtPiScalar(const PiScalar& p) { c[0] = p.ev; c[2] = p.od; }

    static SqrtPiScalar sqrt_pi() { SqrtPiScalar s; s.c[1] = 1; return s; }
    static SqrtPiScalar pi() { SqrtPiScalar s; s.c[2] = 1; return s; }
    /// s^k with s^4 = 1, any integer k.
    static SqrtPiScalar sqrt_pi_pow(long long k) {
        SqrtPiScalar s;
        s.c[static_cast<size_t>(((k % 4) + 4) % 4)] = 1;
        return s;
    }

    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
    bool is_one() const { return c[0] == 1 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
    /// True if the element lies in the subring Z[pi].
    bool is_pi_scalar() const { return c[1] == 0 && c[3] == 0; }

    PiScalar even_part() const { return PiScalar(c[0], c[2]); }
    /// Coefficient of sqrt(pi): x = even_part() + odd_part()*sqrt(pi).
    PiScalar odd_part() const { return PiScalar(c[1], c[3]); }
    PiScalar as_pi_scalar() const { return even_part(); }  // caller checks is_pi_scalar()

    SqrtPiScalar operator-() const {
        SqrtPiScalar r;
        for (int k = 0; k < 4; ++k) r.c[k] = -c[k];
        return r;
    }
    SqrtPiScalar operator+(const SqrtPiScalar& o) const {
        SqrtPiScalar r;
        for (int k = 0; k < 4; ++k) r.c[k] = c[k] + o.c[k];
        return r;
    }
    SqrtPiScalar operator-(const SqrtPiScalar& o) const {
        SqrtPiScalar r;
        for (int k = 0; k < 4; ++k) r.c[k] = c[k] - o.c[k];
        return r;
    }
    SqrtPiScalar operator*(const SqrtPiScalar& o) const {
        SqrtPiScalar r;
        for (int a = 0; a < 4; ++a) {
            if (c[a] == 0) continue;
            for (int b = 0; b < 4; ++b) {
                if (o.c[b] == 0) continue;
                r.c[(a + b) & 3] += c[a] * o.c[b];
            }
        }
        return r;
    }
    SqrtPiScalar& operator+=(const SqrtPiScalar& o) { *this = *this + o; return *this; }
    SqrtPiScalar& operator-=(const SqrtPiScalar& o) { *this = *this - o; return *this; }
    SqrtPiScalar& operator*=(const SqrtPiScalar& o) { *this = *this * o; return *this; }
    bool operator==(const SqrtPiScalar& o) const { return c == o.c; }
    bool operator!=(const SqrtPiScalar& o) const { return !(*this == o); }

    /// Units of Z[sqrt(pi)] are +-s^k; empty if not a unit.
    std::optional<SqrtPiScalar> try_invert_unit() const {
        int nz = -1, cnt = 0;
        for (int k = 0; k < 4; ++k)
            if (c[k] != 0) { nz = k; ++cnt; }
        if (cnt != 1 || (c[nz] != 1 && c[nz] != -1)) return std::nullopt;
        SqrtPiScalar r = sqrt_pi_pow(-nz);
        if (c[nz] == -1) r = -r;
        return r;
    }

    /// Ring map sqrt(pi) -> (re + im*i) with (re + im*i)^4 = 1; pairs
    /// (1,0),(-1,0),(0,1),(0,-1) are the four admissible specializations.
    std::pair<Int, Int> specialize(Int re, Int im) const {
        // powers of (re, im): 1, z, z^2, z^3
        Int r = c[0], m = 0;
        Int zr = re, zi = im;
        for (int k = 1; k < 4; ++k) {
            r += c[k] * zr;
            m += c[k] * zi;
            Int nr = zr * re - zi * im, ni = zr * im + zi * re;
            zr = nr;
            zi = ni;
        }
        return {r, m};
    }

    std::string str() const {
        static const char* names[4] = {"", "s", "pi", "s*pi"};
        std::ostringstream os;
        bool first = true;
        for (int k = 0; k < 4; ++k) {
            if (c[k] == 0) continue;
            if (!first && c[k] > 0) os << "+";
            if (k == 0) os << c[k];
            else if (c[k] == 1) os << names[k];
            else if (c[k] == -1) os << "-" << names[k];
            else os << c[k] << "*" << names[k];
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }
};

inline std::ostream& operator<<(std::ostream& os, const SqrtPiScalar& s) { return os << s.str(); }

inline bool coeff_is_zero(const Int& x) { return x == 0; }
inline bool coeff_is_zero(const Rat& x) { return x == 0; }
inline bool coeff_is_zero(const PiScalar& x) { return x.is_zero(); }
inline bool coeff_is_zero(const SqrtPiScalar& x) { return x.is_zero(); }

}  // namespace qkms
