#include "qkms/perfect.hpp"

#include <algorithm>

namespace qkms {

size_t BasedModule::weight_index(const ZVec& w) const {
    auto it = index.find(w);
    if (it == index.end()) throw std::domain_error("BasedModule: unknown weight");
    return it->second;
}

Mat<RatFuncPi> BasedModule::emat(size_t i, size_t widx) const {
    auto it = e[i].find(widx);
    if (it != e[i].end()) return it->second;
    ZVec up = zvec_add(weights[widx], datum.simple_roots[i]);
    auto upit = index.find(up);
    size_t rows = upit == index.end() ? 0 : dims[upit->second];
    return Mat<RatFuncPi>(rows, dims[widx]);
}

std::optional<size_t> BasedModule::up_index(size_t widx, size_t i) const {
    ZVec up = zvec_add(weights[widx], datum.simple_roots[i]);
    auto it = index.find(up);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

bool vec_is_zero(const PVec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

int epsilon_of(const BasedModule& bm, size_t widx, const PVec& v, size_t i) {
    if (vec_is_zero(v)) return -1;
    size_t total = 0;
    for (size_t d : bm.dims) total += d;
    PVec cur = v;
    size_t w = widx;
    for (size_t n = 0; n <= total; ++n) {
        auto up = bm.up_index(w, i);
        PVec nxt = up ? bm.emat(i, w).apply(cur) : PVec{};
        if (vec_is_zero(nxt)) return static_cast<int>(n);
        cur = std::move(nxt);
        w = *up;
    }
    throw std::logic_error("epsilon_of: e_i not nilpotent within the dimension bound");
}

namespace {

// Expand an ambient vector over the distinguished basis at its weight.
std::optional<PVec> basis_coordinates(const BasedModule& bm, size_t widx, const PVec& v) {
    const auto& b = bm.basis[widx];
    size_t dim = bm.dims[widx];
    Mat<RatFunc> ap(dim, b.size()), am(dim, b.size());
    std::vector<RatFunc> bp(dim), bm_(dim);
    for (size_t r = 0; r < dim; ++r) {
        for (size_t c = 0; c < b.size(); ++c) {
            ap(r, c) = b[c][r].plus;
            am(r, c) = b[c][r].minus;
        }
        bp[r] = v[r].plus;
        bm_[r] = v[r].minus;
    }
    auto xp = solve_linear(std::move(ap), std::move(bp));
    auto xm = solve_linear(std::move(am), std::move(bm_));
    if (!xp || !xm) return std::nullopt;
    PVec out(b.size());
    for (size_t c = 0; c < b.size(); ++c) out[c] = RatFuncPi((*xp)[c], (*xm)[c]);
    return out;
}

// u = c * w componentwise with a unit c; empty if not parallel.
std::optional<RatFuncPi> parallel_ratio(const PVec& u, const PVec& w) {
    RatFunc cp, cm;
    bool have_p = false, have_m = false;
    for (size_t k = 0; k < u.size(); ++k) {
        if (!w[k].plus.is_zero()) {
            RatFunc r = u[k].plus / w[k].plus;
            if (have_p && !(r == cp)) return std::nullopt;
            cp = r;
            have_p = true;
        } else if (!u[k].plus.is_zero()) {
            return std::nullopt;
        }
        if (!w[k].minus.is_zero()) {
            RatFunc r = u[k].minus / w[k].minus;
            if (have_m && !(r == cm)) return std::nullopt;
            cm = r;
            have_m = true;
        } else if (!u[k].minus.is_zero()) {
            return std::nullopt;
        }
    }
    if (!have_p || !have_m) return std::nullopt;
    return RatFuncPi(cp, cm);
}

PVec apply_power(const BasedModule& bm, size_t i, size_t widx, PVec v, int n, size_t* out_w) {
    size_t w = widx;
    for (int t = 0; t < n; ++t) {
        if (vec_is_zero(v)) break;
        v = bm.emat(i, w).apply(v);
        auto up = bm.up_index(w, i);
        if (!up) {
            v.clear();
            break;
        }
        w = *up;
    }
    if (out_w) *out_w = w;
    return v;
}

}  // namespace

const PerfectEntry* PerfectReport::find(const BasisRef& b, size_t i) const {
    for (const auto& e : entries)
        if (e.b == b && e.i == i) return &e;
    return nullptr;
}

PerfectReport check_perfect(const BasedModule& bm) {
    PerfectReport rep;
    rep.perfect = true;
    const size_t rank = bm.datum.rank;
    // basis sanity: invertible coordinate matrix per weight
    for (size_t w = 0; w < bm.weights.size(); ++w) {
        if (bm.basis[w].size() != bm.dims[w]) {
            rep.perfect = false;
            rep.failure = "basis size mismatch at a weight";
            return rep;
        }
        if (bm.dims[w] == 0) continue;
        Mat<RatFunc> ap(bm.dims[w], bm.dims[w]), am(bm.dims[w], bm.dims[w]);
        for (size_t r = 0; r < bm.dims[w]; ++r)
            for (size_t c = 0; c < bm.dims[w]; ++c) {
                ap(r, c) = bm.basis[w][c][r].plus;
                am(r, c) = bm.basis[w][c][r].minus;
            }
        if (gauss_rank(std::move(ap)) != bm.dims[w] ||
            gauss_rank(std::move(am)) != bm.dims[w]) {
            rep.perfect = false;
            rep.failure = "basis is not invertible per pi-component";
            return rep;
        }
    }

    for (size_t w = 0; w < bm.weights.size(); ++w) {
        for (size_t k = 0; k < bm.basis[w].size(); ++k) {
            const PVec& b = bm.basis[w][k];
            for (size_t i = 0; i < rank; ++i) {
                PVec eb = bm.emat(i, w).apply(b);
                if (vec_is_zero(eb)) continue;
                auto up = bm.up_index(w, i);
                PerfectEntry ent;
                ent.b = {w, k};
                ent.i = i;
                ent.epsilon = epsilon_of(bm, w, b, i);
                // u = e_i^{eps-1}(e_i b) != 0 by definition of eps
                size_t uw = 0;
                PVec u = apply_power(bm, i, *up, eb, ent.epsilon - 1, &uw);
                size_t found = 0;
                for (size_t k2 = 0; k2 < bm.basis[*up].size(); ++k2) {
                    const PVec& cand = bm.basis[*up][k2];
                    size_t cw = 0;
                    PVec cu = apply_power(bm, i, *up, cand, ent.epsilon - 1, &cw);
                    if (vec_is_zero(cu)) continue;
                    // candidate must die one step later: eps_i(cand) = eps - 1
                    if (!vec_is_zero(apply_power(bm, i, cw, cu, 1, nullptr))) continue;
                    auto ratio = parallel_ratio(u, cu);
                    if (!ratio || !ratio->is_unit()) continue;
                    ++found;
                    ent.etilde = {*up, k2};
                    ent.c = *ratio;
                }
                ent.axiom_b_ok = (found == 1);
                if (!ent.axiom_b_ok) {
                    rep.perfect = false;
                    if (rep.failure.empty())
                        rep.failure = "axiom (b): " + std::to_string(found) +
                                      " leading candidates at weight index " +
                                      std::to_string(w);
                }
                rep.entries.push_back(std::move(ent));
            }
        }
    }

    // axiom (c): etilde is injective on {b : eps_i(b) fixed}
    for (size_t a = 0; a < rep.entries.size() && rep.perfect; ++a)
        for (size_t b2 = a + 1; b2 < rep.entries.size(); ++b2) {
            const auto& x = rep.entries[a];
            const auto& y = rep.entries[b2];
            if (x.i != y.i || !x.axiom_b_ok || !y.axiom_b_ok) continue;
            if (x.epsilon == y.epsilon && x.etilde == y.etilde && !(x.b == y.b)) {
                rep.perfect = false;
                rep.failure = "axiom (c): etilde not injective at fixed epsilon";
            }
        }
    return rep;
}

PerfectReport check_strong(const BasedModule& bm) {
    PerfectReport rep = check_perfect(bm);
    if (!rep.perfect) {
        rep.strong = false;
        return rep;
    }
    rep.strong = true;
    for (auto& ent : rep.entries) {
        if (!ent.axiom_b_ok) continue;
        size_t i = ent.i;
        LaurentPi bracket =
            gauss_pi(static_cast<unsigned>(ent.epsilon), static_cast<int>(bm.datum.d[i]),
                     bm.datum.parity[i]);
        RatFuncPi q = ent.c / RatFuncPi::from_laurent(bracket);
        auto lp = q.as_laurent_pi();
        bool ok = false;
        if (lp && lp->terms().size() == 1) {
            const auto& [expn, coeff] = lp->terms()[0];
            if (coeff == PiScalar(1) || coeff == PiScalar(-1) ||
                coeff == PiScalar::pi() || coeff == -PiScalar::pi()) {
                ok = true;
                ent.cert_m = expn;
                ent.cert_pi = coeff.od != 0 ? 1 : 0;
                ent.cert_sign = (coeff.ev + coeff.od) > 0 ? 1 : -1;
            }
        }
        ent.strong = ok;
        if (!ok) {
            rep.strong = false;
            if (rep.failure.empty()) rep.failure = "strongness: c is not pi^e q^m [eps]";
        }
    }
    return rep;
}

Cmp preorder(const BasedModule& bm, const std::vector<size_t>& seq, size_t widx1,
             const PVec& v1, size_t widx2, const PVec& v2) {
    if (seq.empty()) return Cmp::Equiv;
    size_t i = seq[0];
    int e1 = epsilon_of(bm, widx1, v1, i);
    int e2 = epsilon_of(bm, widx2, v2, i);
    if (e1 < e2) return Cmp::Less;
    if (e1 > e2) return Cmp::Greater;
    if (seq.size() == 1) return Cmp::Equiv;
    std::vector<size_t> tail(seq.begin() + 1, seq.end());
    // divided-power top application, then recurse
    auto [w1, u1] = e_top(bm, {i}, widx1, v1);
    auto [w2, u2] = e_top(bm, {i}, widx2, v2);
    return preorder(bm, tail, w1, u1, w2, u2);
}

std::pair<size_t, PVec> e_top(const BasedModule& bm, const std::vector<size_t>& seq,
                              size_t widx, const PVec& v) {
    size_t w = widx;
    PVec cur = v;
    for (size_t i : seq) {
        int eps = epsilon_of(bm, w, cur, i);
        if (eps <= 0) continue;
        size_t nw = 0;
        cur = apply_power(bm, i, w, cur, eps, &nw);
        RatFuncPi fact = RatFuncPi::from_laurent(gauss_pi_fact(
            static_cast<unsigned>(eps), static_cast<int>(bm.datum.d[i]), bm.datum.parity[i]));
        for (auto& x : cur) x = x / fact;
        w = nw;
    }
    return {w, cur};
}

bool recognition_check(const BasedModule& bm, const PerfectReport& report,
                       const std::vector<LatticeGenerator>& gens, std::string* witness) {
    auto fail = [&](const std::string& msg) {
        if (witness) *witness = msg;
        return false;
    };
    if (!report.perfect || !report.strong)
        return fail("hypothesis: basis is not strong perfect");

    // B^H must be a single highest element; locate it
    std::optional<BasisRef> vlam;
    for (size_t w = 0; w < bm.weights.size(); ++w)
        for (size_t k = 0; k < bm.basis[w].size(); ++k) {
            bool highest = true;
            for (size_t i = 0; i < bm.datum.rank && highest; ++i)
                highest = vec_is_zero(bm.emat(i, w).apply(bm.basis[w][k]));
            if (highest) {
                if (vlam) return fail("hypothesis: B^H has more than one element");
                vlam = BasisRef{w, k};
            }
        }
    if (!vlam) return fail("hypothesis: no highest basis vector");

    for (const auto& gen : gens) {
        size_t gw = bm.weight_index(gen.weight);
        auto coords = basis_coordinates(bm, gw, gen.coords);
        if (!coords) return fail("generator does not expand over B");
        // support of u over B
        std::vector<size_t> supp;
        for (size_t k = 0; k < coords->size(); ++k)
            if (!(*coords)[k].is_zero()) supp.push_back(k);
        if (supp.empty()) continue;

        // build a string sending every support element into B^H
        std::vector<size_t> seq;
        {
            std::vector<std::pair<size_t, PVec>> cur;
            for (size_t k : supp) cur.emplace_back(gw, bm.basis[gw][k]);
            bool progress = true;
            while (progress) {
                progress = false;
                for (size_t i = 0; i < bm.datum.rank && !progress; ++i) {
                    bool useful = false;
                    for (auto& [w, v] : cur)
                        useful = useful || epsilon_of(bm, w, v, i) > 0;
                    if (!useful) continue;
                    seq.push_back(i);
                    for (auto& wv : cur) {
                        auto [nw, nv] = e_top(bm, {i}, wv.first, wv.second);
                        wv = {nw, std::move(nv)};
                    }
                    progress = true;
                }
            }
            for (auto& [w, v] : cur)
                if (!(w == vlam->widx))
                    return fail("e-string did not reach the highest weight space");
        }

        // the support must be linearly ordered by the preorder; sort descending
        std::vector<size_t> order = supp;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            Cmp c = preorder(bm, seq, gw, bm.basis[gw][a], gw, bm.basis[gw][b]);
            return c == Cmp::Greater;
        });
        for (size_t t = 0; t + 1 < order.size(); ++t) {
            Cmp c = preorder(bm, seq, gw, bm.basis[gw][order[t]], gw,
                             bm.basis[gw][order[t + 1]]);
            if (c == Cmp::Equiv)
                return fail("support is not linearly ordered by the preorder");
        }

        // descending elimination: peel maximal terms, coefficients must be A^pi
        PVec residual = gen.coords;
        for (size_t t = 0; t < order.size(); ++t) {
            size_t bk = order[t];
            // exponent chain of the current maximal element
            size_t w = gw;
            PVec v = bm.basis[gw][bk];
            std::vector<int> exps;
            for (size_t i : seq) {
                int eps = epsilon_of(bm, w, v, i);
                exps.push_back(eps > 0 ? eps : 0);
                if (eps > 0) {
                    size_t nw = 0;
                    v = apply_power(bm, i, w, v, eps, &nw);
                    RatFuncPi fact = RatFuncPi::from_laurent(
                        gauss_pi_fact(static_cast<unsigned>(eps),
                                      static_cast<int>(bm.datum.d[i]), bm.datum.parity[i]));
                    for (auto& x : v) x = x / fact;
                    w = nw;
                }
            }
            if (w != vlam->widx) return fail("chain did not land in the top space");
            auto a_ratio = parallel_ratio(v, bm.basis[vlam->widx][vlam->k]);
            if (!a_ratio || !a_ratio->is_unit())
                return fail("leading image is not a unit multiple of v_Lambda");
            RatFuncPi a_b = *a_ratio;
            // apply the same chain to the residual
            size_t rw = gw;
            PVec r = residual;
            for (size_t s = 0; s < seq.size(); ++s) {
                if (exps[s] == 0) continue;
                size_t nw = 0;
                r = apply_power(bm, seq[s], rw, r, exps[s], &nw);
                RatFuncPi fact = RatFuncPi::from_laurent(
                    gauss_pi_fact(static_cast<unsigned>(exps[s]),
                                  static_cast<int>(bm.datum.d[seq[s]]),
                                  bm.datum.parity[seq[s]]));
                for (auto& x : r) x = x / fact;
                rw = nw;
                if (r.empty() || vec_is_zero(r)) break;
            }
            RatFuncPi c_b;
            if (!r.empty() && !vec_is_zero(r) && rw == vlam->widx) {
                auto ratio = parallel_ratio(r, bm.basis[vlam->widx][vlam->k]);
                if (!ratio) return fail("chain image of the residual is not on the v_Lambda line");
                c_b = *ratio / a_b;
            }
            if (!c_b.as_laurent_pi().has_value()) {
                return fail("coefficient of basis element " + std::to_string(bk) +
                            " at weight index " + std::to_string(gw) +
                            " lies outside A^pi: " + c_b.str());
            }
            // subtract and continue
            for (size_t r2 = 0; r2 < residual.size(); ++r2)
                residual[r2] -= c_b * bm.basis[gw][bk][r2];
        }
        if (!vec_is_zero(residual)) return fail("elimination left a nonzero residual");
    }
    return true;
}

BasedModule based_from_hw(const HWModule& hw) {
    if (hw.family.kind != HWFamily::Kind::Tilde)
        throw std::domain_error("based_from_hw: tilde-family modules only");
    BasedModule bm;
    bm.datum = hw.datum;
    bm.e.resize(hw.datum.rank);
    for (size_t b = 0; b < hw.betas.size(); ++b) {
        const ZVec& beta = hw.betas[b];
        ZVec w = zvec_sub(hw.lambda, hw.datum.root_to_weight(beta));
        bm.weights.push_back(w);
        bm.index[w] = b;
        bm.dims.push_back(hw.dim_at(beta));
    }
    for (size_t b = 0; b < hw.betas.size(); ++b) {
        const ZVec& beta = hw.betas[b];
        for (size_t i = 0; i < hw.datum.rank; ++i) {
            if (beta[i] == 0) continue;
            Mat<RatFuncSqrt> e = hw.emat(i, beta);
            Mat<RatFuncPi> out(e.rows(), e.cols());
            for (size_t r = 0; r < e.rows(); ++r)
                for (size_t c = 0; c < e.cols(); ++c) out(r, c) = e(r, c).as_pi_elt();
            bm.e[i].emplace(b, std::move(out));
        }
    }
    for (size_t b = 0; b < hw.betas.size(); ++b) {
        std::vector<PVec> basis;
        for (size_t k = 0; k < bm.dims[b]; ++k) {
            PVec v(bm.dims[b]);
            v[k] = RatFuncPi(1);
            basis.push_back(std::move(v));
        }
        bm.basis.push_back(std::move(basis));
    }
    return bm;
}

BasedModule based_module_from_json(const Json& j) {
    BasedModule bm;
    bm.datum = cartan_from_json(j.at("datum"));
    bm.e.resize(bm.datum.rank);
    for (const auto& w : j.at("weights")) bm.weights.push_back(w.get<ZVec>());
    for (size_t k = 0; k < bm.weights.size(); ++k) bm.index[bm.weights[k]] = k;
    bm.dims = j.at("dims").get<std::vector<size_t>>();
    for (const auto& [key, mats] : j.at("e").items()) {
        size_t i = static_cast<size_t>(std::stoul(key)) - 1;
        for (const auto& [from, rows] : mats.items()) {
            size_t widx = static_cast<size_t>(std::stoul(from));
            Mat<RatFuncPi> m(rows.size(), rows.empty() ? 0 : rows[0].size());
            for (size_t r = 0; r < rows.size(); ++r)
                for (size_t c = 0; c < rows[r].size(); ++c)
                    m(r, c) = ratfunc_pi_from_json(rows[r][c]);
            bm.e[i].emplace(widx, std::move(m));
        }
    }
    for (const auto& wb : j.at("basis")) {
        std::vector<PVec> basis;
        for (const auto& vec : wb) {
            PVec v;
            for (const auto& x : vec) v.push_back(ratfunc_pi_from_json(x));
            basis.push_back(std::move(v));
        }
        bm.basis.push_back(std::move(basis));
    }
    return bm;
}

Json based_module_to_json(const BasedModule& bm) {
    Json j;
    j["datum"] = cartan_to_json(bm.datum);
    j["weights"] = bm.weights;
    j["dims"] = bm.dims;
    Json e = Json::object();
    for (size_t i = 0; i < bm.e.size(); ++i) {
        Json mats = Json::object();
        for (const auto& [widx, m] : bm.e[i]) {
            Json rows = Json::array();
            for (size_t r = 0; r < m.rows(); ++r) {
                Json row = Json::array();
                for (size_t c = 0; c < m.cols(); ++c) row.push_back(ratfunc_pi_to_json(m(r, c)));
                rows.push_back(row);
            }
            mats[std::to_string(widx)] = rows;
        }
        e[std::to_string(i + 1)] = mats;
    }
    j["e"] = e;
    Json basis = Json::array();
    for (const auto& wb : bm.basis) {
        Json vecs = Json::array();
        for (const auto& v : wb) {
            Json vec = Json::array();
            for (const auto& x : v) vec.push_back(ratfunc_pi_to_json(x));
            vecs.push_back(vec);
        }
        basis.push_back(vecs);
    }
    j["basis"] = basis;
    return j;
}

Json perfect_report_to_json(const BasedModule& bm, const PerfectReport& rep) {
    Json j;
    j["perfect"] = rep.perfect;
    j["strong"] = rep.strong;
    if (!rep.failure.empty()) j["failure"] = rep.failure;
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        Json ent;
        ent["weight"] = bm.weights[e.b.widx];
        ent["basis_index"] = e.b.k;
        ent["i"] = e.i + 1;
        ent["epsilon"] = e.epsilon;
        ent["axiom_b"] = e.axiom_b_ok;
        if (e.axiom_b_ok) {
            ent["etilde_weight"] = bm.weights[e.etilde.widx];
            ent["etilde_index"] = e.etilde.k;
            ent["c"] = ratfunc_pi_to_json(e.c);
            ent["strong"] = e.strong;
            if (e.strong) {
                ent["cert"] = Json{{"pi", e.cert_pi}, {"m", e.cert_m}, {"sign", e.cert_sign}};
            }
        }
        entries.push_back(ent);
    }
    j["entries"] = entries;
    return j;
}

}  // namespace qkms
