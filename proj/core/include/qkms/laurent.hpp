#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "qkms/pi_scalar.hpp"

namespace qkms {

/// Sparse Laurent polynomial in one variable q over a commutative
/// coefficient ring C.  Terms are kept sorted by exponent with no stored
/// zero coefficients, so operator== is structural equality.
template <class C>
class SparseLaurent {
public:
    using Term = std::pair<int, C>;

    SparseLaurent() = default;
    SparseLaurent(long long constant) {
        C c{constant};
        if (!coeff_is_zero(c)) terms_.emplace_back(0, std::move(c));
    }
    SparseLaurent(const C& constant) {
        if (!coeff_is_zero(constant)) terms_.emplace_back(0, constant);
    }

    static SparseLaurent monomial(int exp, C coeff) {
        SparseLaurent r;
        if (!coeff_is_zero(coeff)) r.terms_.emplace_back(exp, std::move(coeff));
        return r;
    }
    static SparseLaurent q_pow(int exp) { return monomial(exp, C{1}); }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == C{1};
    }
    int min_exp() const { return terms_.empty() ? 0 : terms_.front().first; }
    int max_exp() const { return terms_.empty() ? 0 : terms_.back().first; }

    C coeff(int exp) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                                   [](const Term& t, int e) { return t.first < e; });
        if (it != terms_.end() && it->first == exp) return it->second;
        return C{0};
    }

    void add_term(int exp, const C& c) {
        if (coeff_is_zero(c)) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                                   [](const Term& t, int e) { return t.first < e; });
        if (it != terms_.end() && it->first == exp) {
            it->second += c;
            if (coeff_is_zero(it->second)) terms_.erase(it);
        } else {
            terms_.insert(it, Term(exp, c));
        }
    }

    SparseLaurent operator-() const {
        SparseLaurent r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }
    SparseLaurent operator+(const SparseLaurent& o) const {
        SparseLaurent r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    SparseLaurent operator-(const SparseLaurent& o) const {
        SparseLaurent r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }
    SparseLaurent operator*(const SparseLaurent& o) const {
        std::map<int, C> acc;
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) {
                auto it = acc.find(e1 + e2);
                if (it == acc.end()) acc.emplace(e1 + e2, c1 * c2);
                else it->second += c1 * c2;
            }
        SparseLaurent r;
        for (auto& [e, c] : acc)
            if (!coeff_is_zero(c)) r.terms_.emplace_back(e, std::move(c));
        return r;
    }
    SparseLaurent& operator+=(const SparseLaurent& o) { *this = *this + o; return *this; }
    SparseLaurent& operator-=(const SparseLaurent& o) { *this = *this - o; return *this; }
    SparseLaurent& operator*=(const SparseLaurent& o) { *this = *this * o; return *this; }
    bool operator==(const SparseLaurent& o) const { return terms_ == o.terms_; }
    bool operator!=(const SparseLaurent& o) const { return !(*this == o); }

    SparseLaurent scaled(const C& s) const {
        SparseLaurent r;
        for (const auto& [e, c] : terms_) {
            C x = c * s;
            if (!coeff_is_zero(x)) r.terms_.emplace_back(e, std::move(x));
        }
        return r;
    }
    SparseLaurent shifted(int k) const {
        SparseLaurent r = *this;
        for (auto& [e, c] : r.terms_) e += k;
        return r;
    }

    SparseLaurent pow(unsigned n) const {
        SparseLaurent r{1};
        SparseLaurent b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    /// Inverse of a unit monomial u*q^k (u a unit of C); throws otherwise.
    SparseLaurent inverted_monomial() const {
        if (terms_.size() != 1) throw std::domain_error("not an invertible monomial");
        return monomial(-terms_[0].first, invert_unit_coeff(terms_[0].second));
    }

    template <class F>
    auto map_coeffs(F&& f) const -> SparseLaurent<std::decay_t<decltype(f(std::declval<C>()))>> {
        SparseLaurent<std::decay_t<decltype(f(std::declval<C>()))>> r;
        for (const auto& [e, c] : terms_) r.add_term(e, f(c));
        return r;
    }

private:
    static C invert_unit_coeff(const C& c);

    std::vector<Term> terms_;
};

using Laurent = SparseLaurent<Int>;          // Z[q, q^-1]
using LaurentPi = SparseLaurent<PiScalar>;   // A^pi = Z[q, q^-1][pi]
using LaurentSqrt = SparseLaurent<SqrtPiScalar>;

template <>
inline Int SparseLaurent<Int>::invert_unit_coeff(const Int& c) {
    if (c == 1 || c == -1) return c;
    throw std::domain_error("coefficient is not a unit of Z");
}
template <>
inline PiScalar SparseLaurent<PiScalar>::invert_unit_coeff(const PiScalar& c) {
    auto inv = PiScalar(1).try_div(c);
    if (!inv) throw std::domain_error("coefficient is not a unit of Z[pi]");
    return *inv;
}
template <>
inline SqrtPiScalar SparseLaurent<SqrtPiScalar>::invert_unit_coeff(const SqrtPiScalar& c) {
    auto inv = c.try_invert_unit();
    if (!inv) throw std::domain_error("coefficient is not a unit of Z[sqrt(pi)]");
    return *inv;
}

inline LaurentSqrt to_sqrt(const LaurentPi& x) {
    return x.map_coeffs([](const PiScalar& c) { return SqrtPiScalar(c); });
}

/// Projects to A^pi; throws if a genuine sqrt(pi) part is present.
inline LaurentPi to_pi(const LaurentSqrt& x) {
    return x.map_coeffs([](const SqrtPiScalar& c) {
        if (!c.is_pi_scalar()) throw std::domain_error("element has a sqrt(pi) component");
        return c.as_pi_scalar();
    });
}

/// Evaluation pi -> sign, the ring map A^pi -> Z[q, q^-1].
inline Laurent specialize_pi(const LaurentPi& x, int sign) {
    return x.map_coeffs([sign](const PiScalar& c) { return c.specialize(sign); });
}

inline std::string to_string(const Laurent& x) {
    if (x.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [e, c] : x.terms()) {
        std::ostringstream os;
        if (!first && c > 0) os << "+";
        if (e == 0) os << c;
        else {
            if (c == -1) os << "-";
            else if (c != 1) os << c << "*";
            os << "q";
            if (e != 1) os << "^" << e;
        }
        s += os.str();
        first = false;
    }
    return s;
}

inline std::string to_string(const LaurentPi& x) {
    if (x.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [e, c] : x.terms()) {
        std::string cs = c.str();
        if (c.ev != 0 && c.od != 0) cs = "(" + cs + ")";
        if (!first) s += " + ";
        if (e == 0) s += cs;
        else if (cs == "1") s += "q^" + std::to_string(e);
        else s += cs + "*q^" + std::to_string(e);
        first = false;
    }
    return s;
}

}  // namespace qkms
