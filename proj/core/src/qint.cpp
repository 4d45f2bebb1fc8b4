#include "qkms/qint.hpp"

namespace qkms {

std::optional<BivarPi> try_div_exact(const BivarPi& f, const BivarPi& g) {
    if (g.is_zero()) return std::nullopt;
    if (f.is_zero()) return BivarPi{};
    for (const auto& [k, c] : f.terms())
        if (k.first < 0 || k.second < 0) return std::nullopt;
    for (const auto& [k, c] : g.terms())
        if (k.first < 0 || k.second < 0) return std::nullopt;

    auto lead = [](const BivarPi& p) { return std::prev(p.terms().end()); };
    BivarPi rem = f, quot;
    auto glt = lead(g);
    while (!rem.is_zero()) {
        auto flt = lead(rem);
        int ea = flt->first.first - glt->first.first;
        int eb = flt->first.second - glt->first.second;
        if (ea < 0 || eb < 0) return std::nullopt;
        auto c = flt->second.try_div(glt->second);
        if (!c) return std::nullopt;
        BivarPi t = BivarPi::monomial(ea, eb, *c);
        quot += t;
        rem -= t * g;
    }
    return quot;
}

namespace {

// Dense division over Q of integer polynomials (constant term first);
// empty unless the quotient is exact with integer coefficients.
std::optional<std::vector<Int>> div_dense_int(const std::vector<Int>& f,
                                              const std::vector<Int>& g) {
    if (g.empty()) return std::nullopt;
    if (f.empty()) return std::vector<Int>{};
    if (f.size() < g.size()) return std::nullopt;
    std::vector<Rat> rem(f.begin(), f.end());
    Rat glead(g.back());
    std::vector<Rat> quot(f.size() - g.size() + 1, Rat(0));
    for (int d = static_cast<int>(rem.size()) - 1;
         d >= static_cast<int>(g.size()) - 1; --d) {
        if (rem[static_cast<size_t>(d)] == 0) continue;
        int qd = d - (static_cast<int>(g.size()) - 1);
        Rat c = rem[static_cast<size_t>(d)] / glead;
        quot[static_cast<size_t>(qd)] = c;
        for (size_t k = 0; k < g.size(); ++k)
            rem[static_cast<size_t>(qd) + k] -= c * Rat(g[k]);
    }
    for (const Rat& r : rem)
        if (r != 0) return std::nullopt;
    std::vector<Int> out(quot.size());
    for (size_t k = 0; k < quot.size(); ++k) {
        if (denominator(quot[k]) != 1) return std::nullopt;
        out[k] = numerator(quot[k]);
    }
    return out;
}

std::vector<Int> to_dense(const Laurent& x, int shift) {
    std::vector<Int> v;
    if (x.is_zero()) return v;
    v.assign(static_cast<size_t>(x.max_exp() + shift) + 1, Int(0));
    for (const auto& [e, c] : x.terms()) v[static_cast<size_t>(e + shift)] = c;
    return v;
}

Laurent from_dense(const std::vector<Int>& v, int shift) {
    Laurent r;
    for (size_t k = 0; k < v.size(); ++k)
        if (v[k] != 0) r.add_term(static_cast<int>(k) - shift, v[k]);
    return r;
}

}  // namespace

std::optional<Laurent> try_div_exact(const Laurent& f, const Laurent& g) {
    if (g.is_zero()) return std::nullopt;
    if (f.is_zero()) return Laurent{};
    int fs = -f.min_exp(), gs = -g.min_exp();
    auto q = div_dense_int(to_dense(f, fs), to_dense(g, gs));
    if (!q) return std::nullopt;
    return from_dense(*q, fs - gs);
}

std::optional<LaurentPi> try_div_exact(const LaurentPi& f, const LaurentPi& g) {
    auto qp = try_div_exact(specialize_pi(f, +1), specialize_pi(g, +1));
    auto qm = try_div_exact(specialize_pi(f, -1), specialize_pi(g, -1));
    if (!qp || !qm) return std::nullopt;
    // Recombine: 2*ev = plus + minus, 2*od = plus - minus must be integral.
    LaurentPi out;
    Laurent twice_ev = *qp + *qm, twice_od = *qp - *qm;
    std::map<int, std::pair<Int, Int>> acc;
    for (const auto& [e, c] : twice_ev.terms()) acc[e].first = c;
    for (const auto& [e, c] : twice_od.terms()) acc[e].second = c;
    for (const auto& [e, pr] : acc) {
        if (pr.first % 2 != 0 || pr.second % 2 != 0) return std::nullopt;
        out.add_term(e, PiScalar(pr.first / 2, pr.second / 2));
    }
    return out;
}

LaurentPi gauss_pi(unsigned n, int d, int parity) {
    LaurentPi r;
    for (unsigned k = 0; k < n; ++k) {
        int e = d * (1 - static_cast<int>(n) + 2 * static_cast<int>(k));
        r.add_term(e, PiScalar::pi_pow(parity ? static_cast<long long>(k) : 0));
    }
    return r;
}

LaurentPi gauss_pi_fact(unsigned n, int d, int parity) {
    LaurentPi r{1};
    for (unsigned k = 2; k <= n; ++k) r *= gauss_pi(k, d, parity);
    return r;
}

LaurentPi gauss_pi_binom(unsigned m, unsigned n, int d, int parity) {
    if (n > m) throw std::domain_error("gauss_pi_binom: n > m");
    LaurentPi num = gauss_pi_fact(m, d, parity);
    LaurentPi den = gauss_pi_fact(m - n, d, parity) * gauss_pi_fact(n, d, parity);
    auto q = try_div_exact(num, den);
    if (!q) throw std::logic_error("gauss_pi_binom: quotient left a remainder");
    return *q;
}

}  // namespace qkms
