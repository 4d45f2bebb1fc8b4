#pragma once

#include "qkms/uminus.hpp"

namespace qkms {

/// Verma-module engine for the tilde-parameter algebras: contravariant
/// form values on words and irreducible weight dimensions via Gram ranks.
class VermaContext {
public:
    VermaContext(CartanSuperdatum datum, TildeThetaP tilde, ZVec lambda);

    const CartanSuperdatum& datum() const { return datum_; }
    const TildeThetaP& tilde() const { return tilde_; }
    const ZVec& lambda() const { return lambda_; }

    /// (1 - tp_i^m)/(1 - tp_i) as an exact A^pi element (any integer m).
    LaurentPi k_bracket(size_t i, long long m) const;
    LaurentPi tp_pow(size_t i, long long k) const;

    /// e_i applied to f_w u_Lambda, expanded over the word basis.
    std::map<Word, LaurentPi> e_action(size_t i, const Word& w);

    /// Contravariant form value (f_{w1} u, f_{w2} u).
    LaurentPi verma_form_words(const Word& w1, const Word& w2);
    const Mat<LaurentPi>& verma_gram(const ZVec& beta);
    const std::vector<Word>& words_at(const ZVec& beta);

    /// dim V(Lambda)_{Lambda-beta}: Gram rank per pi-component, components
    /// agreeing, with a randomized evaluation cross-check.
    size_t irr_weight_dim(const ZVec& beta);

private:
    CartanSuperdatum datum_;
    TildeThetaP tilde_;
    std::vector<std::vector<LaurentPi>> ttheta_;
    std::vector<LaurentPi> tp_;
    ZVec lambda_;
    std::map<ZVec, std::vector<Word>> words_cache_;
    std::map<ZVec, Mat<LaurentPi>> gram_cache_;
    std::map<std::pair<size_t, Word>, std::map<Word, LaurentPi>> e_cache_;
};

/// Parameter family attached to a built module: either tilde-type
/// (relation against (1-K~)/(1-tp)) or theta-type (relation against
/// (K - K^-1)/(p - p^-1) with a chi weight character).
struct HWFamily {
    enum class Kind { Tilde, Theta };
    Kind kind = Kind::Tilde;
    TildeThetaP tilde;
    ThetaP theta;
    ChiFunction chi;  // Theta kind only
};

/// Highest-weight module realized as Verma modulo the form radical:
/// per-weight pivot words and exact E_i/F_i matrices.
struct HWModule {
    CartanSuperdatum datum;
    HWFamily family;
    ZVec lambda;
    unsigned cutoff = 0;

    std::vector<ZVec> betas;  // height-then-lex order, |beta| <= cutoff
    std::map<ZVec, size_t> index;
    std::vector<std::vector<Word>> pivots;
    // Fmat[i][beta]: block beta -> beta + alpha_i ; Emat[i][beta]: -> beta - alpha_i
    std::vector<std::map<ZVec, Mat<RatFuncSqrt>>> Fmat, Emat;

    bool has_block(const ZVec& beta) const { return index.count(beta) > 0; }
    size_t dim_at(const ZVec& beta) const {
        auto it = index.find(beta);
        return it == index.end() ? 0 : pivots[it->second].size();
    }
    /// Operator matrix, with missing/empty blocks as zero matrices.
    Mat<RatFuncSqrt> fmat(size_t i, const ZVec& beta) const;
    Mat<RatFuncSqrt> emat(size_t i, const ZVec& beta) const;
    /// True if every alpha_i-neighbor of the block lies inside the cutoff.
    bool interior(const ZVec& beta) const;

    /// K-eigenvalue on block beta: tp^{<h_i, Lambda-beta>} resp. chi.
    RatFuncSqrt k_eigen(size_t i, const ZVec& beta) const;
};

/// Builds V(Lambda) for a tilde family; asserts E_i v = 0 and
/// f_i^{<h_i,Lambda>+1} v = 0 along the way.
HWModule build_hw(VermaContext& ctx, unsigned cutoff);

/// Super-commutation check on every interior block:
///  E_i F_j - q^{-(a_i|a_j)} pi^{p(i)p(j)} F_j E_i = delta_ij (1-K~_i)/(1-tp_i).
/// `corrupt_comm_sign` flips the pi-power (negative control).
bool check_EF(const HWModule& hw, bool corrupt_comm_sign = false);

/// Divided-power identity for e^{n}, f^{m} on every block where all the
/// needed neighbors exist (tilde families).
bool check_divided_powers(const HWModule& hw, unsigned n, unsigned m, size_t i);

/// Weyl-Kac character: beta -> dim V(Lambda)_{Lambda-beta} for |beta| <= cutoff.
std::map<ZVec, long long> weyl_kac_char(const CartanSuperdatum& datum, const ZVec& lambda,
                                        unsigned cutoff);

/// Nilpotency bound: dims vanish for k >= <h_i,Lambda> + |beta| max_j(-a_ij) + 1.
long long nilpotency_bound(const CartanSuperdatum& datum, const ZVec& lambda,
                           const ZVec& beta, size_t i);

/// Reinterprets a tilde-family module as a theta-family module along the
/// embedding e_i -> p_i^{-1} p_ii e_i K_i (lift must satisfy cond-pt and
/// square to the tilde data).
HWModule to_theta_family(const HWModule& hw, const ThetaP& lift);

/// Gauge characters x, y, eps, c between two theta families in the same
/// gauge class.
struct GaugeCharacters {
    std::vector<std::vector<LaurentSqrt>> x, y, eps;
    std::vector<RatFuncSqrt> c;
};
GaugeCharacters gauge_solve(const ThetaP& from, const ThetaP& to,
                            const CartanSuperdatum& datum);

/// Transports a theta-family module to another family in the same gauge
/// class; weight dimensions are unchanged.
HWModule gauge_transform(const HWModule& hw, const ThetaP& to);

/// Blockwise quantum Casimir data for a theta-family (boldU) module.
struct CasimirContext {
    std::map<ZVec, int> t_exponent;                 // t(Lambda-beta) = pi^e
    std::map<ZVec, RatFuncSqrt> psi;                // Psi(-gamma)
    std::map<ZVec, Mat<RatFuncSqrt>> omega_hat;     // per block
};

/// Builds Phi from dual bases of U^- (boldU form) and the normalized
/// weight scalar; omega_hat should be the identity on V(Lambda).
CasimirContext casimir_build(const HWModule& hw, UMinusContext& uminus_bold);
bool casimir_check(const HWModule& hw, const CasimirContext& cas);

}  // namespace qkms
