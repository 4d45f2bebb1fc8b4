#include "qkms/ratfunc.hpp"

namespace qkms {

void RatFunc::reduce() {
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    if (num_.is_zero()) { den_ = ZPoly(1); return; }
    ZPoly g = zpoly_gcd(num_, den_);  // includes the content gcd, lead > 0
    if (g != ZPoly(1)) {
        num_ = *num_.try_div_exact(g);
        den_ = *den_.try_div_exact(g);
    }
    if (den_.lead() < 0) { num_ = -num_; den_ = -den_; }
}

std::optional<Laurent> RatFunc::as_laurent() const {
    if (num_.is_zero()) return Laurent{};
    // den must be +-q^k (it is primitive with positive lead, so q^k).
    for (int k = 0; k < den_.degree(); ++k)
        if (den_.coeff(static_cast<size_t>(k)) != 0) return std::nullopt;
    if (den_.lead() != 1) return std::nullopt;
    int shift = den_.degree();
    Laurent r;
    for (size_t k = 0; k < num_.coeffs().size(); ++k)
        if (num_.coeffs()[k] != 0)
            r.add_term(static_cast<int>(k) - shift, num_.coeffs()[k]);
    return r;
}

std::optional<LaurentPi> RatFuncPi::as_laurent_pi() const {
    auto p = plus.as_laurent();
    auto m = minus.as_laurent();
    if (!p || !m) return std::nullopt;
    LaurentPi out;
    Laurent tev = *p + *m, tod = *p - *m;
    std::map<int, std::pair<Int, Int>> acc;
    for (const auto& [e, c] : tev.terms()) acc[e].first = c;
    for (const auto& [e, c] : tod.terms()) acc[e].second = c;
    for (const auto& [e, pr] : acc) {
        if (pr.first % 2 != 0 || pr.second % 2 != 0) return std::nullopt;
        out.add_term(e, PiScalar(pr.first / 2, pr.second / 2));
    }
    return out;
}

}  // namespace qkms
