#pragma once

#include <tuple>

#include "qkms/cartan.hpp"
#include "qkms/linalg.hpp"

namespace qkms {

/// Residue sequence nu in I^n and permutations of S_n (one-line, 0-based).
using Residues = std::vector<uint8_t>;
using Perm = std::vector<uint8_t>;

Perm perm_identity(size_t n);
Perm perm_compose(const Perm& f, const Perm& g);  // f o g
Perm perm_of_word(size_t n, const std::vector<uint8_t>& word);
size_t perm_length(const Perm& p);  // inversion count

/// Coefficient data Q_{i,j}(x1,x2) = sum t_{i,j;(r,s)} x1^r x2^s over Q,
/// subject to the degree-0, symmetry, invertibility and parity constraints.
struct QParams {
    CartanSuperdatum datum;
    std::string name;
    // stored for i < j; Q_{j,i}(x1,x2) = Q_{i,j}(x2,x1); Q_{i,i} = 0
    std::map<std::pair<size_t, size_t>, std::vector<std::tuple<int, int, Rat>>> q;

    std::vector<std::tuple<int, int, Rat>> q_poly(size_t i, size_t j) const;
};

/// Validates the t-coefficient constraints.
std::optional<Violation> validate(const QParams& p);

/// Presets: "A2" (even rank 2, Q = x1 + x2) and "C6" (rank 2 with one odd
/// index, d = (1,2), Q_{12} = x1^2 + x2).
QParams qparams_preset(const std::string& name);

/// PBW monomial x^a tau_w e(nu); w acts on positions, nu is the right
/// idempotent, exponents are in canonical x_1^{a_1}...x_n^{a_n} order.
struct PBWKey {
    Residues nu;
    std::vector<int> a;
    Perm w;
    bool operator<(const PBWKey& o) const {
        if (nu != o.nu) return nu < o.nu;
        if (a != o.a) return a < o.a;
        return w < o.w;
    }
    bool operator==(const PBWKey& o) const { return nu == o.nu && a == o.a && w == o.w; }
};

struct QHSElement {
    size_t n = 0;
    std::map<PBWKey, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const PBWKey& k, const Rat& c);
    QHSElement operator+(const QHSElement& o) const;
    QHSElement operator-(const QHSElement& o) const;
    QHSElement scaled(const Rat& c) const;
    bool operator==(const QHSElement& o) const { return n == o.n && terms == o.terms; }
};

/// Straightening engine for R(n): a fixed lexicographically-least
/// reduced-word table and rewriting of arbitrary generator words to the
/// PBW normal form.
class QHSContext {
public:
    QHSContext(QParams params, size_t n);

    const QParams& params() const { return params_; }
    const CartanSuperdatum& datum() const { return params_.datum; }
    size_t strands() const { return n_; }

    const std::vector<uint8_t>& chosen_word(const Perm& w) const;
    /// All reduced words of w (Matsumoto graph enumeration).
    std::vector<std::vector<uint8_t>> all_reduced_words(const Perm& w) const;

    QHSElement zero() const { QHSElement e; e.n = n_; return e; }
    QHSElement one() const;                        // sum of all idempotents
    QHSElement gen_e(const Residues& nu) const;
    QHSElement gen_x(size_t k) const;              // x_{k+1}, 0-based k
    QHSElement gen_tau(size_t a) const;            // tau_{a+1}, 0-based a

    QHSElement multiply(const QHSElement& u, const QHSElement& v);

    /// Z-degree and Z2-parity of a homogeneous element; empty for 0 or a
    /// non-homogeneous element.
    std::optional<long long> degree(const QHSElement& u) const;
    std::optional<int> parity(const QHSElement& u) const;
    long long term_degree(const PBWKey& k) const;
    int term_parity(const PBWKey& k) const;

    /// b_k = tau_k x_{k+1} on e(i^n); b_word multiplies them out along the
    /// given reduced word, b_longest uses the chosen word of w_0.
    QHSElement b_word(const std::vector<uint8_t>& word, uint8_t i);
    QHSElement b_longest(uint8_t i);

    /// LHS - RHS of every defining relation straightens to zero.
    bool relations_close();

    /// Associativity on random generator words.
    bool associativity_fuzz(unsigned rounds, uint64_t seed);

private:
    struct Loose {
        Rat coeff;
        std::vector<int> xleft;
        std::vector<uint8_t> word;
        Residues nu;
    };
    friend struct LooseAccess;

    void push_xs(Loose t, size_t pos, std::vector<uint8_t> pending,
                 std::vector<Loose>& out) const;
    void to_canonical(Loose t, QHSElement& out) const;
    std::vector<Residues> colors_along(const std::vector<uint8_t>& word,
                                       const Residues& nu) const;
    // deviation monomials (coeff, exps for x_a, x_{a+1}, x_{a+2}) for the
    // braid move at strand a with local colors mu
    std::vector<std::tuple<Rat, int, int, int>> braid_deviation(size_t a,
                                                                const Residues& mu) const;

    QParams params_;
    size_t n_;
    std::map<Perm, std::vector<uint8_t>> chosen_;
};

/// (q,pi)-graded dimension of R(beta) on a degree window, from the PBW
/// monomial generating function.
LaurentPi graded_dim(QHSContext& ctx, const ZVec& beta, int lo, int hi);

/// (q,pi)-character data: finitely supported map I^n -> A^pi.
using QhsCharacter = std::map<Residues, LaurentPi>;

/// Character of L(i^n) = induced from the trivial polynomial module:
/// the tau-word degree generating function on e(i^n).
QhsCharacter character_L_in(QHSContext& ctx, uint8_t i, size_t n);

/// Restriction to sequences ending in i^k (the character shadow of
/// e(beta - k alpha_i, i^k) M) and the crystal-style epsilon.
QhsCharacter char_delta(const QhsCharacter& ch, uint8_t i, size_t k);
size_t char_epsilon(const QhsCharacter& ch, uint8_t i);

/// Cyclotomic polynomial a^Lambda_i(u) with supplied c-coefficients
/// (c[0] must be 1); checks the parity constraint on odd indices.
struct CycloPoly {
    size_t degree;
    std::vector<Rat> coeffs;  // c_{i;0..deg}, a(u) = sum c_k u^{deg-k}
};
CycloPoly cyclotomic_poly(const CartanSuperdatum& dm, const ZVec& lambda, size_t i,
                          const std::vector<Rat>& c);
bool cyclotomic_degree_check(const CartanSuperdatum& dm, const ZVec& lambda, size_t i,
                             const std::vector<Rat>& c);

/// Tiny expression grammar for the CLI: tokens e(1,2,...), x<k>, t<k>, '*'.
QHSElement parse_qhs_expression(QHSContext& ctx, const std::string& expr);
Json qhs_element_to_json(const QHSContext& ctx, const QHSElement& u);

}  // namespace qkms
