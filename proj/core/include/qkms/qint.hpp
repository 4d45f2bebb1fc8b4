#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qkms/laurent.hpp"

namespace qkms {

/// Bivariate Laurent polynomial in commuting variables a, b over Z[pi].
/// Generic ground ring for the two-parameter q-integer identities.
class BivarPi {
public:
    using Key = std::pair<int, int>;  // (exp_a, exp_b)

    BivarPi() = default;
    BivarPi(long long c) { add_term(0, 0, PiScalar(c)); }
    BivarPi(const PiScalar& c) { add_term(0, 0, c); }

    static BivarPi var_a(int e = 1) { BivarPi r; r.add_term(e, 0, PiScalar(1)); return r; }
    static BivarPi var_b(int e = 1) { BivarPi r; r.add_term(0, e, PiScalar(1)); return r; }
    static BivarPi monomial(int ea, int eb, PiScalar c) {
        BivarPi r;
        r.add_term(ea, eb, std::move(c));
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, PiScalar>& terms() const { return terms_; }

    void add_term(int ea, int eb, const PiScalar& c) {
        if (c.is_zero()) return;
        auto key = Key(ea, eb);
        auto it = terms_.find(key);
        if (it == terms_.end()) terms_.emplace(key, c);
        else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    BivarPi operator-() const {
        BivarPi r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    BivarPi operator+(const BivarPi& o) const {
        BivarPi r = *this;
        for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, c);
        return r;
    }
    BivarPi operator-(const BivarPi& o) const {
        BivarPi r = *this;
        for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, -c);
        return r;
    }
    BivarPi operator*(const BivarPi& o) const {
        BivarPi r;
        for (const auto& [k1, c1] : terms_)
            for (const auto& [k2, c2] : o.terms_)
                r.add_term(k1.first + k2.first, k1.second + k2.second, c1 * c2);
        return r;
    }
    BivarPi& operator+=(const BivarPi& o) { *this = *this + o; return *this; }
    BivarPi& operator-=(const BivarPi& o) { *this = *this - o; return *this; }
    BivarPi& operator*=(const BivarPi& o) { *this = *this * o; return *this; }
    bool operator==(const BivarPi& o) const { return terms_ == o.terms_; }
    bool operator!=(const BivarPi& o) const { return !(*this == o); }

    BivarPi pow(unsigned n) const {
        BivarPi r{1};
        BivarPi x = *this;
        while (n) {
            if (n & 1) r = r * x;
            x = x * x;
            n >>= 1;
        }
        return r;
    }

private:
    std::map<Key, PiScalar> terms_;  // lex order on (exp_a, exp_b)
};

/// Exact division f / g of bivariate polynomials (nonnegative exponents);
/// empty if the division leaves a remainder.
std::optional<BivarPi> try_div_exact(const BivarPi& f, const BivarPi& g);

/// Exact division in Z[q,q^-1], via polynomial division over Q plus an
/// integrality check.
std::optional<Laurent> try_div_exact(const Laurent& f, const Laurent& g);

/// Exact division in A^pi, componentwise at pi = +1 / -1 and recombined.
std::optional<LaurentPi> try_div_exact(const LaurentPi& f, const LaurentPi& g);

/// [n]_{a,b} = a^{n-1} + a^{n-2} b + ... + b^{n-1}  (polynomial form).
template <class R>
R qint(unsigned n, const R& a, const R& b) {
    R sum{0};
    if (n == 0) return sum;
    std::vector<R> apow(n), bpow(n);
    apow[0] = R{1};
    bpow[0] = R{1};
    for (unsigned k = 1; k < n; ++k) {
        apow[k] = apow[k - 1] * a;
        bpow[k] = bpow[k - 1] * b;
    }
    for (unsigned k = 0; k < n; ++k) sum += apow[n - 1 - k] * bpow[k];
    return sum;
}

template <class R>
R qfact(unsigned n, const R& a, const R& b) {
    R prod{1};
    for (unsigned k = 2; k <= n; ++k) prod *= qint(k, a, b);
    return prod;
}

/// [m choose n]_{a,b} = [m]!/([m-n]![n]!), by exact polynomial division
/// with a remainder-free assertion.
template <class R>
R qbinom(unsigned m, unsigned n, const R& a, const R& b) {
    if (n > m) throw std::domain_error("qbinom: n > m");
    R num = qfact(m, a, b);
    R den = qfact(m - n, a, b) * qfact(n, a, b);
    auto q = try_div_exact(num, den);
    if (!q) throw std::logic_error("qbinom: factorial quotient left a remainder");
    return *q;
}

/// Division-free (a,b)-Pascal recursion; independent route used as an oracle:
/// [m choose n] = a^n [m-1 choose n] + b^(m-n) [m-1 choose n-1].
template <class R>
R qbinom_pascal(unsigned m, unsigned n, const R& a, const R& b) {
    if (n > m) throw std::domain_error("qbinom: n > m");
    std::vector<std::vector<R>> tab(m + 1);
    for (unsigned i = 0; i <= m; ++i) {
        tab[i].assign(std::min(i, n) + 1, R{0});
        tab[i][0] = R{1};
        for (unsigned j = 1; j <= std::min(i, n); ++j) {
            if (j == i) { tab[i][j] = R{1}; continue; }
            tab[i][j] = a.pow(j) * tab[i - 1][j] + b.pow(i - j) * tab[i - 1][j - 1];
        }
    }
    return tab[m][n];
}

/// Checks   sum_k [n choose k]_{a,b} (ab)^{k(k-1)/2} z^k
///        = prod_{k=0}^{n-1} (1 + a^{n-1-k} b^k z)
/// as polynomials in z over the coefficient ring of a and b.
template <class R>
bool bino_identity_check(unsigned n, const R& a, const R& b) {
    std::vector<R> lhs(n + 1, R{0}), rhs(n + 1, R{0});
    R ab = a * b;
    for (unsigned k = 0; k <= n; ++k)
        lhs[k] = qbinom(n, k, a, b) * ab.pow(k * (k - 1) / 2);
    rhs[0] = R{1};
    for (unsigned k = 0; k < n; ++k) {
        R m = a.pow(n - 1 - k) * b.pow(k);
        for (unsigned j = std::min(n, k + 1); j >= 1; --j)
            rhs[j] += m * rhs[j - 1];
    }
    for (unsigned k = 0; k <= n; ++k)
        if (!(lhs[k] == rhs[k])) return false;
    return true;
}

/// Super Gauss integer [n]_i^pi = sum_{k=0}^{n-1} q_i^{1-n+2k} pi_i^k,
/// for an index with symmetrizer d and parity p.
LaurentPi gauss_pi(unsigned n, int d, int parity);
LaurentPi gauss_pi_fact(unsigned n, int d, int parity);
/// [m choose n]_i^pi via factorial quotient (exact division).
LaurentPi gauss_pi_binom(unsigned m, unsigned n, int d, int parity);

}  // namespace qkms
