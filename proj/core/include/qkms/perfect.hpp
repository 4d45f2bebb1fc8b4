#pragma once

#include "qkms/highest.hpp"

namespace qkms {

/// Weight-graded module with e_i operators and a distinguished basis,
/// everything over Q(q)^pi.  Ambient coordinates are per weight space.
struct BasedModule {
    CartanSuperdatum datum;
    std::vector<ZVec> weights;  // P-coordinates
    std::map<ZVec, size_t> index;
    std::vector<size_t> dims;
    // e[i][w]: matrix from weight w to weight w + alpha_i
    std::vector<std::map<size_t, Mat<RatFuncPi>>> e;
    // basis[w]: list of coordinate vectors forming the distinguished basis
    std::vector<std::vector<std::vector<RatFuncPi>>> basis;

    size_t weight_index(const ZVec& w) const;
    bool has_weight(const ZVec& w) const { return index.count(w) > 0; }
    Mat<RatFuncPi> emat(size_t i, size_t widx) const;  // zero if absent
    std::optional<size_t> up_index(size_t widx, size_t i) const;
};

using PVec = std::vector<RatFuncPi>;

bool vec_is_zero(const PVec& v);

/// Smallest n with e_i^{n+1} v = 0; -1 encodes -infinity (v = 0).
/// Throws if e_i is not nilpotent on v within the dimension bound.
int epsilon_of(const BasedModule& bm, size_t widx, const PVec& v, size_t i);

struct BasisRef {
    size_t widx = 0;
    size_t k = 0;
    bool operator==(const BasisRef& o) const { return widx == o.widx && k == o.k; }
    bool operator<(const BasisRef& o) const {
        return widx != o.widx ? widx < o.widx : k < o.k;
    }
};

struct PerfectEntry {
    BasisRef b;
    size_t i = 0;
    int epsilon = 0;
    bool axiom_b_ok = false;
    BasisRef etilde;       // valid when axiom_b_ok
    RatFuncPi c;           // leading coefficient c_i(b)
    // strongness certificate: c = sign * pi^eps q^m [epsilon]_i^pi
    bool strong = false;
    int cert_pi = 0;
    long long cert_m = 0;
    int cert_sign = 1;
};

struct PerfectReport {
    std::vector<PerfectEntry> entries;
    bool perfect = false;
    bool strong = false;
    std::string failure;

    const PerfectEntry* find(const BasisRef& b, size_t i) const;
};

/// Perfect-basis axioms (a)-(c): unique leading basis term modulo the
/// e_i-kernel filtration, and injectivity of the induced etilde.
PerfectReport check_perfect(const BasedModule& bm);

/// Runs check_perfect, then certifies every c_i(b) to be of the form
/// (+-) pi^eps q^m [epsilon_i(b)]_i^pi by exact Laurent division.
PerfectReport check_strong(const BasedModule& bm);

enum class Cmp { Less, Equiv, Greater };

/// The i-indexed preorder on nonzero vectors.
Cmp preorder(const BasedModule& bm, const std::vector<size_t>& seq, size_t widx1,
             const PVec& v1, size_t widx2, const PVec& v2);

/// e_top: divided-power top application along the index sequence.
std::pair<size_t, PVec> e_top(const BasedModule& bm, const std::vector<size_t>& seq,
                              size_t widx, const PVec& v);

struct LatticeGenerator {
    ZVec weight;
    PVec coords;  // ambient coordinates at that weight
};

/// Recognition-theorem pipeline: verifies, by descending elimination along
/// e-strings, that every generator expands over B with A^pi coefficients.
/// On failure, *witness describes the offending coefficient.
bool recognition_check(const BasedModule& bm, const PerfectReport& report,
                       const std::vector<LatticeGenerator>& gens, std::string* witness);

/// Ambient view of a built highest-weight module (tilde family): basis =
/// the pivot images, e-matrices from the module action.
BasedModule based_from_hw(const HWModule& hw);

BasedModule based_module_from_json(const Json& j);
Json based_module_to_json(const BasedModule& bm);
Json perfect_report_to_json(const BasedModule& bm, const PerfectReport& rep);

}  // namespace qkms
