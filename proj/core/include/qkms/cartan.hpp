#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkms/jsonio.hpp"
#include "qkms/laurent.hpp"

namespace qkms {

/// Integer coordinate vector, either in the chosen basis of the weight
/// lattice P or in the root lattice (indexed by I).
using ZVec = std::vector<long long>;

ZVec zvec_add(const ZVec& a, const ZVec& b);
ZVec zvec_sub(const ZVec& a, const ZVec& b);
ZVec zvec_scale(const ZVec& a, long long s);
long long zvec_height(const ZVec& a);

/// Symmetrizable Cartan superdatum with an explicit weight lattice:
/// Cartan matrix A, symmetrizer D, parity, the pairing <h_i, .> and the
/// coordinates of the simple roots on a chosen basis of P, plus the
/// symmetric form (.|.) on P (rational Gram matrix).
struct CartanSuperdatum {
    std::string name;
    size_t rank = 0;  // |I|
    size_t pdim = 0;  // dimension of P
    std::vector<std::vector<long long>> a;
    std::vector<long long> d;
    std::vector<int> parity;
    std::vector<ZVec> coweights;     // coweights[i][k] = <h_i, basis_k>
    std::vector<ZVec> simple_roots;  // simple_roots[i] = alpha_i in P coords
    std::vector<std::vector<Rat>> form_gram;
    ZVec rho;

    long long pairing(size_t i, const ZVec& lam) const;       // <h_i, lam>
    Rat form(const ZVec& lam, const ZVec& mu) const;          // (lam | mu)
    ZVec reflect(size_t i, const ZVec& lam) const;            // s_i(lam)
    ZVec root_to_weight(const ZVec& beta) const;              // sum k_i alpha_i
    long long root_pairing(size_t i, const ZVec& beta) const; // <h_i, beta>
    long long root_form(const ZVec& b1, const ZVec& b2) const;  // (b1|b2), integral
    int parity_of(const ZVec& beta) const;                    // additive parity
    bool is_Pev(const ZVec& lam) const;
    bool is_C6() const;  // d_i odd iff i odd

    ZVec fundamental_combination(const ZVec& coeffs) const;  // sum c_i Lambda_i
    LaurentPi q_i(size_t i) const { return LaurentPi::q_pow(static_cast<int>(d[i])); }
};

struct Violation {
    std::string axiom;
    std::string detail;
};

/// Checks every datum invariant; reports the first failing axiom by name.
std::optional<Violation> validate(const CartanSuperdatum& datum);

struct WeylElement {
    std::vector<size_t> word;
    int sign = 1;  // (-1)^length
    std::vector<ZVec> action;  // pdim x pdim matrix, action[r][c]
};

/// Elements of W up to the given length, deduplicated by action matrix.
std::vector<WeylElement> weyl_group(const CartanSuperdatum& datum, size_t length_cutoff);

struct RootTable {
    struct Entry {
        ZVec beta;  // root-lattice coordinates
        long long mult;
    };
    std::vector<Entry> entries;
    bool height_complete = false;  // finite type: the full list
};

/// Positive roots with multiplicities.  Finite type: complete list by
/// reflection closure, all mult 1.  General symmetrizable: Peterson
/// recurrence up to the height cutoff.
RootTable positive_roots(const CartanSuperdatum& datum, size_t height_cutoff);

/// Finite-type test: the symmetrized matrix DA is positive definite.
bool is_finite_type(const CartanSuperdatum& datum);

/// Named presets: A1, A1odd, A2, B2, A1affine.
CartanSuperdatum cartan_preset(const std::string& name);

CartanSuperdatum cartan_from_json(const Json& j);
Json cartan_to_json(const CartanSuperdatum& d);

}  // namespace qkms
