#pragma once

#include "qkms/cartan.hpp"
#include "qkms/ratfunc.hpp"

namespace qkms {

/// x^k for any integer k; negative powers require x to be a unit monomial.
LaurentSqrt lpow(const LaurentSqrt& x, long long k);

/// Per-index choice of sqrt(pi_i): a unit of Z[sqrt(pi)] squaring to pi_i.
/// Default: +1 for even indices, sqrt(pi) for odd ones.
std::vector<SqrtPiScalar> default_sqrt_choice(const CartanSuperdatum& datum);
std::vector<SqrtPiScalar> pi_sqrt_choice(const CartanSuperdatum& datum);  // pi / sqrt(pi)*pi

/// Parameter family (theta, p) for the algebras with relation
/// e_i f_j - theta_ji f_j e_i = delta_ij (K_i - K_i^-1)/(p_i - p_i^-1).
struct ThetaP {
    std::string name;
    std::vector<std::vector<LaurentSqrt>> theta;
    std::vector<std::vector<LaurentSqrt>> p_off;  // p_ij
    std::vector<LaurentSqrt> p_diag;              // p_i
};

/// Parameter family (ttheta, tp) for the algebras with relation
/// e_i f_j - ttheta_ji f_j e_i = delta_ij (1 - K~_i)/(1 - p~_i).
struct TildeThetaP {
    std::string name;
    std::vector<std::vector<LaurentSqrt>> ttheta;
    std::vector<LaurentSqrt> tp;
};

/// Verifies cond: p_ij^2 = p_i^{2a_ij},
///               (p_ij p_ji)/(theta_ij theta_ji) = p_i^{2a_ij},
///               p_ii/theta_ii = p_i^2.
std::optional<Violation> check_pt(const ThetaP& tp, const CartanSuperdatum& datum);

/// Verifies cond: ttheta_ij ttheta_ji = tp_i^{-a_ij} and ttheta_ii = tp_i^{-1}.
std::optional<Violation> check_ttp(const TildeThetaP& tp, const CartanSuperdatum& datum);

/// ttheta_ij = theta_ij p_ji^{-1}, tp_i = p_i^2.
TildeThetaP derive_tilde(const ThetaP& tp);

/// Explicit lift of a (ttheta, tp) family: p_i = sqrt(tp_i) (supplied via
/// the sqrt choice), p_ij = p_i^{a_ij}, theta_ij = ttheta_ij p_j^{a_ji}.
ThetaP lift_tilde(const TildeThetaP& tp, const CartanSuperdatum& datum,
                  const std::vector<SqrtPiScalar>& sqrt_choice);

/// Named parameter presets from the defining displays:
///   BKM    theta_ii = pi_i, theta_ij = 1, p_i = q_i sqrt(pi_i), p_ij = q_i^{a_ij}
///   boldU  theta_ii = 1, theta_ij = sqrt(pi_j)^{a_ji}, p_ij = p_i^{a_ij}
ThetaP preset_theta_p(const std::string& name, const CartanSuperdatum& datum,
                      const std::vector<SqrtPiScalar>& sqrt_choice);
/// Uqsg: tp_i = q_i^2 pi_i, ttheta_ij = pi^{p(i)p(j)} q_i^{-a_ij}.
TildeThetaP preset_uqsg(const CartanSuperdatum& datum);

/// Weight character chi_i with chi_i(lam0 + sum m_j alpha_j)
/// = p_i^{<h_i, lam0>} prod_j p_ij^{m_j}.
struct ChiFunction {
    ZVec base;                                 // lambda_0
    std::vector<LaurentSqrt> base_vals;        // chi_i(lambda_0)
    std::vector<std::vector<LaurentSqrt>> pij; // shift rule data

    LaurentSqrt eval(const CartanSuperdatum& datum, size_t i, const ZVec& lam) const;
};

ChiFunction chi_build(const CartanSuperdatum& datum, const ThetaP& tp, const ZVec& lam0);

/// Coordinates of lam in the root lattice relative to base (lam = base + sum
/// m_j alpha_j); empty if lam - base is not in Q.
std::optional<ZVec> root_coordinates(const CartanSuperdatum& datum, const ZVec& base,
                                     const ZVec& lam);

/// Gauge-class comparison: the three invariants of the twisted-family
/// equivalence (p_ij^2, (p_ij p_ji)/(theta_ij theta_ji), p_ii/theta_ii).
bool gauge_equivalent(const ThetaP& f1, const ThetaP& f2, const CartanSuperdatum& datum);

/// JSON: {preset: name} or explicit {theta, p, p_diag} with the LaurentPi
/// encoding (triples [exp, even, odd]); sqrt(pi) entries use 5-tuples
/// [exp, c0, c1, c2, c3].
Json theta_p_to_json(const ThetaP& tp);
Json tilde_to_json(const TildeThetaP& tp);
LaurentSqrt laurent_sqrt_from_json(const Json& j);
Json laurent_sqrt_to_json(const LaurentSqrt& x);

}  // namespace qkms
