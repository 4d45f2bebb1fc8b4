#pragma once

#include <map>

#include "qkms/linalg.hpp"
#include "qkms/params.hpp"

namespace qkms {

/// Monomial f_{i1} ... f_{in} in the free negative half, letters 0-based.
using Word = std::vector<uint8_t>;

ZVec word_weight(size_t rank, const Word& w);  // content beta in Q+
std::string word_str(const Word& w);
/// All words of content beta in lexicographic order.
std::vector<Word> enumerate_words(size_t rank, const ZVec& beta);

/// Formal A^pi-linear combination of equal-weight words with rational
/// function coefficients; the Serre ideal is never quotiented out, it is
/// detected through the radical of the bilinear form.
struct UMinusElt {
    std::map<Word, RatFuncPi> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const Word& w, const RatFuncPi& c);
    UMinusElt operator+(const UMinusElt& o) const;
    UMinusElt operator-(const UMinusElt& o) const;
    UMinusElt scaled(const RatFuncPi& c) const;
    bool operator==(const UMinusElt& o) const { return terms == o.terms; }

    static UMinusElt word(const Word& w) {
        UMinusElt e;
        e.terms.emplace(w, RatFuncPi(1));
        return e;
    }
};

/// Scalars for the boson operators e_i', e_i^* acting on the word algebra:
/// the tilde parameter matrix, required to lie in the pi-ring.
struct BosonParams {
    CartanSuperdatum datum;
    std::string family;
    std::vector<std::vector<LaurentPi>> ttheta;
    std::vector<LaurentPi> tp;

    static BosonParams from_tilde(const CartanSuperdatum& datum, const TildeThetaP& tilde);
};

/// Engine for U^-: word enumeration, boson operators, the bilinear form
/// with (1,1)=1 and (P, f_i Q) = (e_i' P, Q), Gram matrices and ranks.
class UMinusContext {
public:
    explicit UMinusContext(BosonParams params, unsigned jobs = 1);

    const BosonParams& params() const { return params_; }
    const CartanSuperdatum& datum() const { return params_.datum; }

    /// All words of content beta, in a fixed lexicographic order.
    const std::vector<Word>& words_at(const ZVec& beta);

    /// e_i' on a word: coefficients stay in A^pi.
    std::map<Word, LaurentPi> eprime_word(size_t i, const Word& w);
    /// e_i^* by the left-scan recursion with accumulated Ad scalars.
    std::map<Word, LaurentPi> estar_word(size_t i, const Word& w);
    /// right-scan variant, used as a cross-check oracle.
    std::map<Word, LaurentPi> estar_word_rightscan(size_t i, const Word& w);

    UMinusElt eprime(size_t i, const UMinusElt& x);
    UMinusElt estar(size_t i, const UMinusElt& x);

    /// Gram matrix of the form on the words of content beta (A^pi valued).
    const Mat<LaurentPi>& gram(const ZVec& beta);

    /// Word-level form value.
    LaurentPi form_words(const Word& w1, const Word& w2);
    /// Bilinear extension; zero when the weights differ.
    RatFuncPi form(const UMinusElt& x, const UMinusElt& y);

    /// Rank of gram(beta) computed independently at pi = +1 and pi = -1;
    /// both components must agree and the randomized evaluation rank must
    /// confirm the symbolic rank.
    size_t weight_dim(const ZVec& beta);

    /// Verifies e_i'^n f_j = ttheta_ji^n f_j e_i'^n + delta p_i^{1-n}[n] e_i'^{n-1}
    /// on a set of sample words.
    bool eprime_power_check(size_t i, size_t j, unsigned n, unsigned height_cutoff);

    /// Serre element  sum_k (-ttheta_ji)^{-k} tp_i^{k(k-1)/2}
    ///                f_i^{<1-a_ij-k>} f_j f_i^{<k>}   (divided powers, i != j).
    UMinusElt serre_element(size_t i, size_t j);
    bool serre_in_radical(size_t i, size_t j);

    /// Quantum-boson-algebra relations as operators on words up to the
    /// height cutoff: the e'-Serre relation and e_i' e_j^* = e_j^* e_i'.
    bool boson_relation_check(unsigned height_cutoff);

    /// Kostant partition count: coefficient of e^{-beta} in
    /// prod (1 - e^{-alpha})^{-mult}; the U^- character target.
    long long product_formula_dim(const ZVec& beta, size_t root_height_cutoff = 24);

    /// tp_i^k as an A^pi Laurent element.
    LaurentPi tp_pow(size_t i, long long k) const;
    /// [n]~_i = (1 - tp_i^n)/(1 - tp_i) = sum_{t<n} tp_i^t, and factorials.
    LaurentPi tilde_int(size_t i, unsigned n) const;
    LaurentPi tilde_fact(size_t i, unsigned n) const;

private:
    BosonParams params_;
    unsigned jobs_;
    std::map<ZVec, std::vector<Word>> words_cache_;
    std::map<ZVec, Mat<LaurentPi>> gram_cache_;
    std::map<std::pair<size_t, Word>, std::map<Word, LaurentPi>> eprime_cache_;
    std::optional<RootTable> roots_cache_;
};

/// Integrality report for divided-power normalized form values (the
/// A^pi-lattice question): reported, not asserted.
struct LatticeFormEntry {
    Word w1, w2;
    RatFuncPi value;
    bool in_api;
};
std::vector<LatticeFormEntry> divided_form_report(UMinusContext& ctx, const ZVec& beta);

}  // namespace qkms
