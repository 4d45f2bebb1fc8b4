#include "qkms/cartan.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qkms {

ZVec zvec_add(const ZVec& a, const ZVec& b) {
    ZVec r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
    return r;
}

ZVec zvec_sub(const ZVec& a, const ZVec& b) {
    ZVec r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
    return r;
}

ZVec zvec_scale(const ZVec& a, long long s) {
    ZVec r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] * s;
    return r;
}

long long zvec_height(const ZVec& a) {
    long long h = 0;
    for (long long x : a) h += (x >= 0 ? x : -x);
    return h;
}

long long CartanSuperdatum::pairing(size_t i, const ZVec& lam) const {
    long long s = 0;
    for (size_t k = 0; k < pdim; ++k) s += coweights[i][k] * lam[k];
    return s;
}

Rat CartanSuperdatum::form(const ZVec& lam, const ZVec& mu) const {
    Rat s = 0;
    for (size_t r = 0; r < pdim; ++r) {
        if (lam[r] == 0) continue;
        for (size_t c = 0; c < pdim; ++c)
            if (mu[c] != 0) s += Rat(lam[r]) * form_gram[r][c] * Rat(mu[c]);
    }
    return s;
}

ZVec CartanSuperdatum::reflect(size_t i, const ZVec& lam) const {
    return zvec_sub(lam, zvec_scale(simple_roots[i], pairing(i, lam)));
}

ZVec CartanSuperdatum::root_to_weight(const ZVec& beta) const {
    ZVec w(pdim, 0);
    for (size_t i = 0; i < rank; ++i)
        if (beta[i] != 0) w = zvec_add(w, zvec_scale(simple_roots[i], beta[i]));
    return w;
}

long long CartanSuperdatum::root_pairing(size_t i, const ZVec& beta) const {
    long long s = 0;
    for (size_t j = 0; j < rank; ++j) s += a[i][j] * beta[j];
    return s;
}

long long CartanSuperdatum::root_form(const ZVec& b1, const ZVec& b2) const {
    long long s = 0;
    for (size_t i = 0; i < rank; ++i) {
        if (b1[i] == 0) continue;
        for (size_t j = 0; j < rank; ++j)
            if (b2[j] != 0) s += b1[i] * d[i] * a[i][j] * b2[j];
    }
    return s;
}

int CartanSuperdatum::parity_of(const ZVec& beta) const {
    long long s = 0;
    for (size_t i = 0; i < rank; ++i) s += beta[i] * parity[i];
    return static_cast<int>(((s % 2) + 2) % 2);
}

bool CartanSuperdatum::is_Pev(const ZVec& lam) const {
    for (size_t i = 0; i < rank; ++i)
        if (parity[i] == 1 && pairing(i, lam) % 2 != 0) return false;
    return true;
}

bool CartanSuperdatum::is_C6() const {
    for (size_t i = 0; i < rank; ++i)
        if ((d[i] % 2 != 0) != (parity[i] == 1)) return false;
    return true;
}

ZVec CartanSuperdatum::fundamental_combination(const ZVec& coeffs) const {
    // Presets place the fundamental weights first in the P basis.
    ZVec w(pdim, 0);
    for (size_t i = 0; i < rank && i < coeffs.size(); ++i) w[i] = coeffs[i];
    return w;
}

namespace {

size_t rational_rank(std::vector<std::vector<Rat>> m) {
    size_t rank = 0;
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t piv = rank;
        while (piv < rows && m[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (size_t i = rank + 1; i < rows; ++i) {
            if (m[i][col] == 0) continue;
            Rat f = m[i][col] / m[rank][col];
            for (size_t j = col; j < cols; ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::optional<Violation> validate(const CartanSuperdatum& dm) {
    auto fail = [](std::string axiom, std::string detail) {
        return Violation{std::move(axiom), std::move(detail)};
    };
    const size_t n = dm.rank;
    if (n == 0 || dm.a.size() != n || dm.d.size() != n || dm.parity.size() != n ||
        dm.coweights.size() != n || dm.simple_roots.size() != n ||
        dm.form_gram.size() != dm.pdim || dm.rho.size() != dm.pdim)
        return fail("shape", "inconsistent dimensions");
    for (size_t i = 0; i < n; ++i) {
        if (dm.a[i].size() != n) return fail("shape", "Cartan matrix not square");
        if (dm.coweights[i].size() != dm.pdim || dm.simple_roots[i].size() != dm.pdim)
            return fail("shape", "coweight/simple-root length");
    }
    for (size_t i = 0; i < n; ++i) {
        if (dm.a[i][i] != 2) return fail("cartan diagonal", "a_ii must be 2");
        for (size_t j = 0; j < n; ++j) {
            if (i != j && dm.a[i][j] > 0) return fail("cartan sign", "a_ij > 0 off diagonal");
            if ((dm.a[i][j] == 0) != (dm.a[j][i] == 0))
                return fail("cartan zero symmetry", "a_ij = 0 iff a_ji = 0");
        }
        if (dm.d[i] <= 0) return fail("symmetrizer positivity", "d_i must be positive");
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (dm.d[i] * dm.a[i][j] != dm.d[j] * dm.a[j][i])
                return fail("symmetrizability", "d_i a_ij != d_j a_ji");
    for (size_t i = 0; i < n; ++i) {
        if (dm.parity[i] != 0 && dm.parity[i] != 1)
            return fail("parity range", "parity entries must be 0/1");
        if (dm.parity[i] == 1)
            for (size_t j = 0; j < n; ++j)
                if (dm.a[i][j] % 2 != 0)
                    return fail("superdatum parity",
                                "a_ij must be even for odd i (i=" + std::to_string(i + 1) +
                                    ", j=" + std::to_string(j + 1) + ")");
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (dm.pairing(i, dm.simple_roots[j]) != dm.a[i][j])
                return fail("coweight pairing", "<h_i, alpha_j> != a_ij");
    for (size_t r = 0; r < dm.pdim; ++r) {
        if (dm.form_gram[r].size() != dm.pdim) return fail("shape", "form_gram not square");
        for (size_t c = 0; c < dm.pdim; ++c)
            if (dm.form_gram[r][c] != dm.form_gram[c][r])
                return fail("form symmetry", "( | ) must be symmetric");
    }
    for (size_t i = 0; i < n; ++i) {
        ZVec basis(dm.pdim, 0);
        for (size_t k = 0; k < dm.pdim; ++k) {
            std::fill(basis.begin(), basis.end(), 0);
            basis[k] = 1;
            if (dm.form(dm.simple_roots[i], basis) != Rat(dm.d[i]) * Rat(dm.pairing(i, basis)))
                return fail("form compatibility", "(alpha_i|lambda) != d_i <h_i, lambda>");
        }
    }
    {
        std::vector<std::vector<Rat>> rows;
        for (size_t i = 0; i < n; ++i) {
            std::vector<Rat> row(dm.pdim);
            for (size_t k = 0; k < dm.pdim; ++k) row[k] = Rat(dm.simple_roots[i][k]);
            rows.push_back(std::move(row));
        }
        if (rational_rank(rows) != n)
            return fail("simple roots independent", "simple roots linearly dependent");
    }
    for (size_t i = 0; i < n; ++i)
        if (dm.pairing(i, dm.rho) != 1)
            return fail("rho normalization", "<h_i, rho> != 1");
    return std::nullopt;
}

std::vector<WeylElement> weyl_group(const CartanSuperdatum& dm, size_t length_cutoff) {
    const size_t p = dm.pdim;
    auto refl_matrix = [&](size_t i) {
        std::vector<ZVec> m(p, ZVec(p, 0));
        for (size_t r = 0; r < p; ++r) {
            m[r][r] = 1;
            for (size_t c = 0; c < p; ++c)
                m[r][c] -= dm.simple_roots[i][r] * dm.coweights[i][c];
        }
        return m;
    };
    std::vector<std::vector<ZVec>> gens;
    for (size_t i = 0; i < dm.rank; ++i) gens.push_back(refl_matrix(i));

    auto matmul = [&](const std::vector<ZVec>& x, const std::vector<ZVec>& y) {
        std::vector<ZVec> r(p, ZVec(p, 0));
        for (size_t i = 0; i < p; ++i)
            for (size_t k = 0; k < p; ++k) {
                if (x[i][k] == 0) continue;
                for (size_t j = 0; j < p; ++j) r[i][j] += x[i][k] * y[k][j];
            }
        return r;
    };

    std::vector<WeylElement> out;
    std::set<std::vector<ZVec>> seen;
    WeylElement e;
    e.word = {};
    e.sign = 1;
    e.action.assign(p, ZVec(p, 0));
    for (size_t k = 0; k < p; ++k) e.action[k][k] = 1;
    out.push_back(e);
    seen.insert(e.action);

    size_t frontier_begin = 0;
    for (size_t len = 1; len <= length_cutoff; ++len) {
        size_t frontier_end = out.size();
        for (size_t idx = frontier_begin; idx < frontier_end; ++idx) {
            for (size_t i = 0; i < dm.rank; ++i) {
                // w' = s_i * w, acting on the left
                std::vector<ZVec> m = matmul(gens[i], out[idx].action);
                if (seen.count(m)) continue;
                WeylElement w;
                w.word = out[idx].word;
                w.word.insert(w.word.begin(), i);
                w.sign = -out[idx].sign;
                w.action = m;
                seen.insert(w.action);
                out.push_back(std::move(w));
            }
        }
        if (out.size() == frontier_end) break;  // closed: finite group done
        frontier_begin = frontier_end;
    }
    return out;
}

bool is_finite_type(const CartanSuperdatum& dm) {
    // leading principal minors of DA
    const size_t n = dm.rank;
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m[i][j] = Rat(dm.d[i] * dm.a[i][j]);
    for (size_t k = 1; k <= n; ++k) {
        std::vector<std::vector<Rat>> sub(k, std::vector<Rat>(k));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) sub[i][j] = m[i][j];
        // determinant by fraction-full elimination
        Rat det = 1;
        for (size_t col = 0; col < k; ++col) {
            size_t piv = col;
            while (piv < k && sub[piv][col] == 0) ++piv;
            if (piv == k) { det = 0; break; }
            if (piv != col) { std::swap(sub[piv], sub[col]); det = -det; }
            det *= sub[col][col];
            for (size_t i = col + 1; i < k; ++i) {
                if (sub[i][col] == 0) continue;
                Rat f = sub[i][col] / sub[col][col];
                for (size_t j = col; j < k; ++j) sub[i][j] -= f * sub[col][j];
            }
        }
        if (det <= 0) return false;
    }
    return true;
}

namespace {

RootTable positive_roots_closure(const CartanSuperdatum& dm) {
    std::set<ZVec> roots;
    std::vector<ZVec> frontier;
    for (size_t i = 0; i < dm.rank; ++i) {
        ZVec e(dm.rank, 0);
        e[i] = 1;
        roots.insert(e);
        frontier.push_back(e);
    }
    while (!frontier.empty()) {
        std::vector<ZVec> next;
        for (const ZVec& b : frontier)
            for (size_t i = 0; i < dm.rank; ++i) {
                ZVec r = b;
                r[i] -= dm.root_pairing(i, b);
                if (roots.count(r)) continue;
                roots.insert(r);
                next.push_back(r);
            }
        frontier = std::move(next);
    }
    RootTable t;
    t.height_complete = true;
    for (const ZVec& b : roots) {
        bool pos = true;
        for (long long x : b) pos = pos && x >= 0;
        if (pos) t.entries.push_back({b, 1});
    }
    std::sort(t.entries.begin(), t.entries.end(),
              [](const RootTable::Entry& x, const RootTable::Entry& y) {
                  auto hx = zvec_height(x.beta), hy = zvec_height(y.beta);
                  if (hx != hy) return hx < hy;
                  return x.beta < y.beta;
              });
    return t;
}

// Peterson's recurrence for root multiplicities of a symmetrizable
// Kac-Moody algebra, exact over Q.
RootTable positive_roots_peterson(const CartanSuperdatum& dm, size_t cutoff) {
    std::vector<ZVec> layer_all;  // all beta in Q+ with 1 <= |beta| <= cutoff
    ZVec cur(dm.rank, 0);
    std::function<void(size_t, long long)> gen = [&](size_t pos, long long left) {
        if (pos == dm.rank) {
            if (zvec_height(cur) >= 1) layer_all.push_back(cur);
            return;
        }
        for (long long v = 0; v <= left; ++v) {
            cur[pos] = v;
            gen(pos + 1, left - v);
        }
        cur[pos] = 0;
    };
    gen(0, static_cast<long long>(cutoff));
    std::sort(layer_all.begin(), layer_all.end(), [](const ZVec& x, const ZVec& y) {
        auto hx = zvec_height(x), hy = zvec_height(y);
        if (hx != hy) return hx < hy;
        return x < y;
    });

    std::map<ZVec, Rat> cofactor;  // c_beta = sum_{k | beta} mult(beta/k)/k
    std::map<ZVec, Rat> mult;
    auto two_rho_form = [&](const ZVec& b) {
        long long s = 0;
        for (size_t i = 0; i < dm.rank; ++i) s += 2 * b[i] * dm.d[i];
        return s;
    };
    for (const ZVec& beta : layer_all) {
        long long h = zvec_height(beta);
        if (h == 1) {
            cofactor[beta] = 1;
        } else {
            Rat num = 0;
            // sum over decompositions beta = b1 + b2 with b1, b2 > 0
            std::function<void(size_t, ZVec&)> split = [&](size_t pos, ZVec& b1) {
                if (pos == dm.rank) {
                    if (zvec_height(b1) == 0 || b1 == beta) return;
                    ZVec b2 = zvec_sub(beta, b1);
                    auto it1 = cofactor.find(b1);
                    auto it2 = cofactor.find(b2);
                    if (it1 == cofactor.end() || it2 == cofactor.end()) return;
                    num += Rat(dm.root_form(b1, b2)) * it1->second * it2->second;
                    return;
                }
                for (long long v = 0; v <= beta[pos]; ++v) {
                    b1[pos] = v;
                    split(pos + 1, b1);
                }
                b1[pos] = 0;
            };
            ZVec b1(dm.rank, 0);
            split(0, b1);
            long long denom = dm.root_form(beta, beta) - two_rho_form(beta);
            if (denom == 0) {
                if (num != 0)
                    throw std::logic_error("peterson: vanishing factor with nonzero rhs");
                // not a root (and no divisor contribution forced): c = divisor sum only
                Rat csum = 0;
                for (long long k = 2; k <= h; ++k) {
                    bool divides = true;
                    ZVec sub(dm.rank);
                    for (size_t i = 0; i < dm.rank; ++i) {
                        if (beta[i] % k != 0) { divides = false; break; }
                        sub[i] = beta[i] / k;
                    }
                    if (!divides) continue;
                    auto it = mult.find(sub);
                    if (it != mult.end()) csum += it->second / Rat(k);
                }
                cofactor[beta] = csum;
                mult[beta] = 0;
                continue;
            }
            cofactor[beta] = num / Rat(denom);
        }
        // peel divisor contributions: mult(beta) = c_beta - sum_{k>=2} mult(beta/k)/k
        Rat m = cofactor[beta];
        for (long long k = 2; k <= h; ++k) {
            bool divides = true;
            ZVec sub(dm.rank);
            for (size_t i = 0; i < dm.rank; ++i) {
                if (beta[i] % k != 0) { divides = false; break; }
                sub[i] = beta[i] / k;
            }
            if (!divides) continue;
            auto it = mult.find(sub);
            if (it != mult.end()) m -= it->second / Rat(k);
        }
        if (denominator(m) != 1 || m < 0)
            throw std::logic_error("peterson: non-integral or negative multiplicity");
        mult[beta] = m;
    }

    RootTable t;
    t.height_complete = false;
    for (const ZVec& beta : layer_all) {
        Rat m = mult[beta];
        if (m > 0) t.entries.push_back({beta, static_cast<long long>(numerator(m))});
    }
    return t;
}

}  // namespace

RootTable positive_roots(const CartanSuperdatum& dm, size_t height_cutoff) {
    if (is_finite_type(dm)) return positive_roots_closure(dm);
    return positive_roots_peterson(dm, height_cutoff);
}

CartanSuperdatum cartan_preset(const std::string& name) {
    CartanSuperdatum dm;
    dm.name = name;
    auto fundamental_gram = [&](const CartanSuperdatum& d) {
        // Solve A^T G = D for G on the fundamental-weight basis.
        size_t n = d.rank;
        std::vector<std::vector<Rat>> aug(n, std::vector<Rat>(2 * n, Rat(0)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) aug[i][j] = Rat(d.a[j][i]);
        for (size_t i = 0; i < n; ++i) aug[i][n + i] = 1;
        for (size_t col = 0; col < n; ++col) {
            size_t piv = col;
            while (aug[piv][col] == 0) ++piv;
            std::swap(aug[piv], aug[col]);
            Rat p = aug[col][col];
            for (size_t j = 0; j < 2 * n; ++j) aug[col][j] /= p;
            for (size_t i = 0; i < n; ++i) {
                if (i == col || aug[i][col] == 0) continue;
                Rat f = aug[i][col];
                for (size_t j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[col][j];
            }
        }
        std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) g[i][j] = aug[i][n + j] * Rat(d.d[j]);
        return g;
    };
    auto finish_fundamental = [&](CartanSuperdatum& d) {
        size_t n = d.rank;
        d.pdim = n;
        d.coweights.assign(n, ZVec(n, 0));
        for (size_t i = 0; i < n; ++i) d.coweights[i][i] = 1;
        d.simple_roots.assign(n, ZVec(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) d.simple_roots[i][k] = d.a[k][i];
        d.form_gram = fundamental_gram(d);
        d.rho.assign(n, 1);
    };

    if (name == "A1" || name == "A1odd") {
        dm.rank = 1;
        dm.a = {{2}};
        dm.d = {1};
        dm.parity = {name == "A1odd" ? 1 : 0};
        finish_fundamental(dm);
        return dm;
    }
    if (name == "A2") {
        dm.rank = 2;
        dm.a = {{2, -1}, {-1, 2}};
        dm.d = {1, 1};
        dm.parity = {0, 0};
        finish_fundamental(dm);
        return dm;
    }
    if (name == "B2") {
        dm.rank = 2;
        dm.a = {{2, -1}, {-2, 2}};
        dm.d = {2, 1};
        dm.parity = {0, 0};
        finish_fundamental(dm);
        return dm;
    }
    if (name == "A1affine") {
        dm.rank = 2;
        dm.a = {{2, -2}, {-2, 2}};
        dm.d = {1, 1};
        dm.parity = {0, 0};
        dm.pdim = 3;  // basis Lambda_0, Lambda_1, delta
        dm.coweights = {{1, 0, 0}, {0, 1, 0}};
        dm.simple_roots = {{2, -2, 1}, {-2, 2, 0}};  // alpha_0 = 2L0-2L1+delta
        dm.form_gram = {{Rat(0), Rat(0), Rat(1)},
                        {Rat(0), Rat(1, 2), Rat(1)},
                        {Rat(1), Rat(1), Rat(0)}};
        dm.rho = {1, 1, 0};
        return dm;
    }
    throw std::invalid_argument("unknown Cartan preset: " + name);
}

CartanSuperdatum cartan_from_json(const Json& j) {
    if (j.is_string()) return cartan_preset(j.get<std::string>());
    if (j.contains("preset")) return cartan_preset(j.at("preset").get<std::string>());
    CartanSuperdatum dm;
    dm.name = j.value("name", std::string("custom"));
    dm.rank = j.at("rank").get<size_t>();
    dm.a = j.at("a").get<std::vector<std::vector<long long>>>();
    dm.d = j.at("d").get<std::vector<long long>>();
    dm.parity = j.at("parity").get<std::vector<int>>();
    dm.coweights = j.at("coweights").get<std::vector<ZVec>>();
    dm.simple_roots = j.at("simple_roots").get<std::vector<ZVec>>();
    dm.pdim = dm.coweights.empty() ? 0 : dm.coweights[0].size();
    for (const auto& row : j.at("form_gram")) {
        std::vector<Rat> r;
        for (const auto& x : row) r.push_back(rat_from_json(x));
        dm.form_gram.push_back(std::move(r));
    }
    dm.rho = j.at("rho").get<ZVec>();
    return dm;
}

Json cartan_to_json(const CartanSuperdatum& dm) {
    Json j;
    j["name"] = dm.name;
    j["rank"] = dm.rank;
    j["a"] = dm.a;
    j["d"] = dm.d;
    j["parity"] = dm.parity;
    j["coweights"] = dm.coweights;
    j["simple_roots"] = dm.simple_roots;
    Json g = Json::array();
    for (const auto& row : dm.form_gram) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(rat_to_json(x));
        g.push_back(r);
    }
    j["form_gram"] = g;
    j["rho"] = dm.rho;
    return j;
}

}  // namespace qkms
