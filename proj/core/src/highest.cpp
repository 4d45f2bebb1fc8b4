#include "qkms/highest.hpp"

#include <algorithm>
#include <functional>

namespace qkms {

namespace {

RatFuncSqrt rfs(const LaurentPi& x) { return RatFuncSqrt(RatFuncPi::from_laurent(x)); }
RatFuncSqrt rfs(const LaurentSqrt& x) { return RatFuncSqrt::from_laurent(x); }

Mat<RatFuncSqrt> to_rfs(const Mat<RatFuncPi>& m) {
    Mat<RatFuncSqrt> r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r(i, j) = RatFuncSqrt(m(i, j));
    return r;
}

std::vector<ZVec> betas_up_to(size_t rank, unsigned cutoff) {
    std::vector<ZVec> out;
    ZVec cur(rank, 0);
    std::function<void(size_t, long long)> gen = [&](size_t pos, long long left) {
        if (pos == rank) {
            out.push_back(cur);
            return;
        }
        for (long long v = 0; v <= left; ++v) {
            cur[pos] = v;
            gen(pos + 1, left - v);
        }
        cur[pos] = 0;
    };
    gen(0, cutoff);
    std::sort(out.begin(), out.end(), [](const ZVec& x, const ZVec& y) {
        auto hx = zvec_height(x), hy = zvec_height(y);
        if (hx != hy) return hx < hy;
        return x < y;
    });
    return out;
}

// Solve M x = b over Q(q)^pi componentwise (product of fields).
std::optional<std::vector<RatFuncPi>> solve_pi(const Mat<LaurentPi>& m,
                                               const std::vector<size_t>& cols,
                                               const std::vector<LaurentPi>& rhs) {
    std::vector<RatFuncPi> out(cols.size());
    for (int sign : {+1, -1}) {
        Mat<RatFunc> a(m.rows(), cols.size());
        std::vector<RatFunc> b(m.rows());
        for (size_t i = 0; i < m.rows(); ++i) {
            for (size_t j = 0; j < cols.size(); ++j)
                a(i, j) = RatFunc::from_laurent(specialize_pi(m(i, cols[j]), sign));
            b[i] = RatFunc::from_laurent(specialize_pi(rhs[i], sign));
        }
        auto x = solve_linear(std::move(a), std::move(b));
        if (!x) return std::nullopt;
        for (size_t j = 0; j < cols.size(); ++j) {
            if (sign > 0) out[j].plus = (*x)[j];
            else out[j].minus = (*x)[j];
        }
    }
    return out;
}

}  // namespace

VermaContext::VermaContext(CartanSuperdatum datum, TildeThetaP tilde, ZVec lambda)
    : datum_(std::move(datum)), tilde_(std::move(tilde)), lambda_(std::move(lambda)) {
    const size_t n = datum_.rank;
    ttheta_.assign(n, std::vector<LaurentPi>(n));
    for (size_t i = 0; i < n; ++i) {
        tp_.push_back(to_pi(tilde_.tp[i]));
        for (size_t j = 0; j < n; ++j) ttheta_[i][j] = to_pi(tilde_.ttheta[i][j]);
    }
}

LaurentPi VermaContext::tp_pow(size_t i, long long k) const {
    LaurentPi r{1};
    if (k >= 0) {
        for (long long t = 0; t < k; ++t) r *= tp_[i];
    } else {
        LaurentPi inv = tp_[i].inverted_monomial();
        for (long long t = 0; t < -k; ++t) r *= inv;
    }
    return r;
}

LaurentPi VermaContext::k_bracket(size_t i, long long m) const {
    LaurentPi r;
    if (m >= 0)
        for (long long t = 0; t < m; ++t) r += tp_pow(i, t);
    else
        for (long long t = m; t < 0; ++t) r -= tp_pow(i, t);
    return r;
}

const std::vector<Word>& VermaContext::words_at(const ZVec& beta) {
    auto it = words_cache_.find(beta);
    if (it != words_cache_.end()) return it->second;
    return words_cache_.emplace(beta, enumerate_words(datum_.rank, beta)).first->second;
}

std::map<Word, LaurentPi> VermaContext::e_action(size_t i, const Word& w) {
    auto key = std::make_pair(i, w);
    auto it = e_cache_.find(key);
    if (it != e_cache_.end()) return it->second;
    std::map<Word, LaurentPi> out;
    if (!w.empty()) {
        const size_t j = w[0];
        Word rest(w.begin() + 1, w.end());
        // e_i f_j X u = ttheta_ji f_j (e_i X u) + delta_ij K-bracket(wt(X u)) X u
        const LaurentPi& t = ttheta_[j][i];
        for (const auto& [z, c] : e_action(i, rest)) {
            Word jz;
            jz.reserve(z.size() + 1);
            jz.push_back(static_cast<uint8_t>(j));
            jz.insert(jz.end(), z.begin(), z.end());
            LaurentPi v = t * c;
            auto zt = out.find(jz);
            if (zt == out.end()) out.emplace(std::move(jz), std::move(v));
            else {
                zt->second += v;
                if (zt->second.is_zero()) out.erase(zt);
            }
        }
        if (i == j) {
            ZVec wrest = word_weight(datum_.rank, rest);
            long long m = datum_.pairing(i, lambda_) - datum_.root_pairing(i, wrest);
            LaurentPi kb = k_bracket(i, m);
            if (!kb.is_zero()) {
                auto zt = out.find(rest);
                if (zt == out.end()) out.emplace(rest, kb);
                else {
                    zt->second += kb;
                    if (zt->second.is_zero()) out.erase(zt);
                }
            }
        }
    }
    return e_cache_.emplace(std::move(key), std::move(out)).first->second;
}

const Mat<LaurentPi>& VermaContext::verma_gram(const ZVec& beta) {
    auto it = gram_cache_.find(beta);
    if (it != gram_cache_.end()) return it->second;
    const auto& words = words_at(beta);
    const size_t n = words.size();
    Mat<LaurentPi> g(n, n);
    if (zvec_height(beta) == 0) {
        if (n == 1) g(0, 0) = LaurentPi(1);
        return gram_cache_.emplace(beta, std::move(g)).first->second;
    }
    // (f_i x, y) = (x, e_i y)
    for (size_t r = 0; r < n; ++r) {
        const size_t i = words[r][0];
        Word x(words[r].begin() + 1, words[r].end());
        ZVec sub = beta;
        sub[i] -= 1;
        const auto& pw = words_at(sub);
        const Mat<LaurentPi>& gprev = verma_gram(sub);
        size_t xi = static_cast<size_t>(std::lower_bound(pw.begin(), pw.end(), x) - pw.begin());
        for (size_t c = 0; c < n; ++c) {
            LaurentPi v;
            for (const auto& [z, coeff] : e_action(i, words[c])) {
                size_t zi =
                    static_cast<size_t>(std::lower_bound(pw.begin(), pw.end(), z) - pw.begin());
                v += coeff * gprev(xi, zi);
            }
            g(r, c) = std::move(v);
        }
    }
    return gram_cache_.emplace(beta, std::move(g)).first->second;
}

LaurentPi VermaContext::verma_form_words(const Word& w1, const Word& w2) {
    ZVec b1 = word_weight(datum_.rank, w1), b2 = word_weight(datum_.rank, w2);
    if (b1 != b2) return LaurentPi{};
    const auto& words = words_at(b1);
    size_t i1 = static_cast<size_t>(std::lower_bound(words.begin(), words.end(), w1) - words.begin());
    size_t i2 = static_cast<size_t>(std::lower_bound(words.begin(), words.end(), w2) - words.begin());
    return verma_gram(b1)(i1, i2);
}

size_t VermaContext::irr_weight_dim(const ZVec& beta) {
    const Mat<LaurentPi>& g = verma_gram(beta);
    size_t rp = rank_at_pi(g, +1);
    size_t rm = rank_at_pi(g, -1);
    if (rp != rm)
        throw std::logic_error("irr_weight_dim: pi-component ranks disagree");
    if (eval_rank_at_pi(g, +1, Rat(17, 7)) != rp || eval_rank_at_pi(g, -1, Rat(17, 7)) != rm)
        throw std::logic_error("irr_weight_dim: evaluation rank disagrees with symbolic rank");
    return rp;
}

Mat<RatFuncSqrt> HWModule::fmat(size_t i, const ZVec& beta) const {
    ZVec tgt = beta;
    tgt[i] += 1;
    auto it = Fmat[i].find(beta);
    if (it != Fmat[i].end()) return it->second;
    return Mat<RatFuncSqrt>(dim_at(tgt), dim_at(beta));
}

Mat<RatFuncSqrt> HWModule::emat(size_t i, const ZVec& beta) const {
    ZVec tgt = beta;
    tgt[i] -= 1;
    auto it = Emat[i].find(beta);
    if (it != Emat[i].end()) return it->second;
    size_t td = (tgt[i] < 0) ? 0 : dim_at(tgt);
    return Mat<RatFuncSqrt>(td, dim_at(beta));
}

bool HWModule::interior(const ZVec& beta) const {
    return zvec_height(beta) + 1 <= static_cast<long long>(cutoff);
}

RatFuncSqrt HWModule::k_eigen(size_t i, const ZVec& beta) const {
    if (family.kind == HWFamily::Kind::Tilde) {
        long long m = datum.pairing(i, lambda) - datum.root_pairing(i, beta);
        return rfs(lpow(family.tilde.tp[i], m));
    }
    ZVec mu = zvec_sub(lambda, datum.root_to_weight(beta));
    return rfs(family.chi.eval(datum, i, mu));
}

HWModule build_hw(VermaContext& ctx, unsigned cutoff) {
    HWModule hw;
    hw.datum = ctx.datum();
    hw.family.kind = HWFamily::Kind::Tilde;
    hw.family.tilde = ctx.tilde();
    hw.lambda = ctx.lambda();
    hw.cutoff = cutoff;
    const size_t rank = hw.datum.rank;
    for (size_t i = 0; i < rank; ++i)
        if (hw.datum.pairing(i, hw.lambda) < 0)
            throw std::domain_error("build_hw: lambda is not dominant");

    hw.betas = betas_up_to(rank, cutoff);
    hw.Fmat.resize(rank);
    hw.Emat.resize(rank);
    for (size_t bidx = 0; bidx < hw.betas.size(); ++bidx) {
        const ZVec& beta = hw.betas[bidx];
        hw.index[beta] = bidx;
        const Mat<LaurentPi>& g = ctx.verma_gram(beta);
        size_t r = ctx.irr_weight_dim(beta);
        std::vector<Word> piv;
        if (r > 0) {
            auto cols = select_pivot_columns(g, r);
            if (!cols)
                throw std::logic_error("build_hw: pivot selection failed");
            for (size_t c : *cols) piv.push_back(ctx.words_at(beta)[c]);
        }
        hw.pivots.push_back(std::move(piv));
    }

    // F_i then E_i per block
    for (size_t bidx = 0; bidx < hw.betas.size(); ++bidx) {
        const ZVec& beta = hw.betas[bidx];
        const auto& piv = hw.pivots[bidx];
        if (piv.empty()) continue;
        for (size_t i = 0; i < rank; ++i) {
            ZVec tgt = beta;
            tgt[i] += 1;
            if (!hw.has_block(tgt)) continue;
            const auto& tgt_piv = hw.pivots[hw.index[tgt]];
            Mat<RatFuncPi> f(tgt_piv.size(), piv.size());
            if (!tgt_piv.empty()) {
                const auto& tgt_words = ctx.words_at(tgt);
                const Mat<LaurentPi>& gt = ctx.verma_gram(tgt);
                std::vector<size_t> piv_cols;
                for (const Word& p : tgt_piv)
                    piv_cols.push_back(static_cast<size_t>(
                        std::lower_bound(tgt_words.begin(), tgt_words.end(), p) -
                        tgt_words.begin()));
                for (size_t a = 0; a < piv.size(); ++a) {
                    Word w;
                    w.push_back(static_cast<uint8_t>(i));
                    w.insert(w.end(), piv[a].begin(), piv[a].end());
                    size_t wi = static_cast<size_t>(
                        std::lower_bound(tgt_words.begin(), tgt_words.end(), w) -
                        tgt_words.begin());
                    std::vector<LaurentPi> rhs(tgt_words.size());
                    for (size_t row = 0; row < tgt_words.size(); ++row) rhs[row] = gt(row, wi);
                    auto x = solve_pi(gt, piv_cols, rhs);
                    if (!x) throw std::logic_error("build_hw: F coordinate solve failed");
                    for (size_t k = 0; k < tgt_piv.size(); ++k) f(k, a) = (*x)[k];
                }
            }
            hw.Fmat[i].emplace(beta, to_rfs(f));
        }
    }
    for (size_t bidx = 0; bidx < hw.betas.size(); ++bidx) {
        const ZVec& beta = hw.betas[bidx];
        const auto& piv = hw.pivots[bidx];
        if (piv.empty()) continue;
        for (size_t i = 0; i < rank; ++i) {
            if (beta[i] == 0) continue;
            ZVec tgt = beta;
            tgt[i] -= 1;
            const auto& tgt_piv = hw.pivots[hw.index[tgt]];
            Mat<RatFuncPi> e(tgt_piv.size(), piv.size());
            if (!tgt_piv.empty()) {
                // (E_i u_a, p_c) = (u_a, F_i p_c): square pivot-Gram solve
                const auto& tgt_words = ctx.words_at(tgt);
                const auto& src_words = ctx.words_at(beta);
                const Mat<LaurentPi>& gt = ctx.verma_gram(tgt);
                const Mat<LaurentPi>& gs = ctx.verma_gram(beta);
                const Mat<RatFuncSqrt>& fi = hw.Fmat[i].at(tgt);
                std::vector<size_t> tgt_cols, src_cols;
                for (const Word& p : tgt_piv)
                    tgt_cols.push_back(static_cast<size_t>(
                        std::lower_bound(tgt_words.begin(), tgt_words.end(), p) -
                        tgt_words.begin()));
                for (const Word& p : piv)
                    src_cols.push_back(static_cast<size_t>(
                        std::lower_bound(src_words.begin(), src_words.end(), p) -
                        src_words.begin()));
                Mat<LaurentPi> gpt(tgt_cols.size(), tgt_cols.size());
                for (size_t r2 = 0; r2 < tgt_cols.size(); ++r2)
                    for (size_t c2 = 0; c2 < tgt_cols.size(); ++c2)
                        gpt(r2, c2) = gt(tgt_cols[r2], tgt_cols[c2]);
                for (size_t a = 0; a < piv.size(); ++a) {
                    std::vector<RatFuncPi> rhs(tgt_piv.size());
                    for (size_t c = 0; c < tgt_piv.size(); ++c) {
                        RatFuncSqrt v;
                        for (size_t m = 0; m < piv.size(); ++m)
                            v += fi(m, c) *
                                 rfs(gs(src_cols[a], src_cols[m]));
                        if (!v.is_pi_elt())
                            throw std::logic_error("build_hw: unexpected sqrt component");
                        rhs[c] = v.as_pi_elt();
                    }
                    // solve gpt * x = rhs componentwise
                    std::vector<LaurentPi> dummy;
                    Mat<RatFunc> ap(tgt_piv.size(), tgt_piv.size());
                    Mat<RatFunc> am(tgt_piv.size(), tgt_piv.size());
                    std::vector<RatFunc> bp(tgt_piv.size()), bm(tgt_piv.size());
                    for (size_t r2 = 0; r2 < tgt_piv.size(); ++r2) {
                        for (size_t c2 = 0; c2 < tgt_piv.size(); ++c2) {
                            ap(r2, c2) = RatFunc::from_laurent(specialize_pi(gpt(r2, c2), +1));
                            am(r2, c2) = RatFunc::from_laurent(specialize_pi(gpt(r2, c2), -1));
                        }
                        bp[r2] = rhs[r2].plus;
                        bm[r2] = rhs[r2].minus;
                    }
                    auto xp = solve_linear(std::move(ap), std::move(bp));
                    auto xm = solve_linear(std::move(am), std::move(bm));
                    if (!xp || !xm) throw std::logic_error("build_hw: E adjoint solve failed");
                    for (size_t k = 0; k < tgt_piv.size(); ++k)
                        e(k, a) = RatFuncPi((*xp)[k], (*xm)[k]);
                }
            }
            hw.Emat[i].emplace(beta, to_rfs(e));
        }
    }

    // theorem checks: f_i^{<h_i,Lambda>+1} v_Lambda = 0 within the cutoff
    for (size_t i = 0; i < rank; ++i) {
        long long power = hw.datum.pairing(i, hw.lambda) + 1;
        if (power > static_cast<long long>(cutoff)) continue;
        Mat<RatFuncSqrt> cur = Mat<RatFuncSqrt>::identity(1);
        ZVec b(rank, 0);
        for (long long t = 0; t < power; ++t) {
            cur = hw.fmat(i, b) * cur;
            b[i] += 1;
        }
        if (!cur.is_zero())
            throw std::logic_error("build_hw: f^{<h,Lambda>+1} v != 0");
    }
    return hw;
}

namespace {

RatFuncSqrt comm_coeff(const HWModule& hw, size_t i, size_t j, bool corrupt) {
    RatFuncSqrt c;
    if (hw.family.kind == HWFamily::Kind::Tilde)
        c = rfs(hw.family.tilde.ttheta[j][i]);
    else
        c = rfs(hw.family.theta.theta[j][i]);
    if (corrupt) c = RatFuncSqrt(RatFuncPi::pi()) * c;
    return c;
}

RatFuncSqrt delta_scalar(const HWModule& hw, size_t i, const ZVec& beta) {
    if (hw.family.kind == HWFamily::Kind::Tilde) {
        long long m = hw.datum.pairing(i, hw.lambda) - hw.datum.root_pairing(i, beta);
        // (1 - tp^m)/(1 - tp) exactly
        LaurentPi tp = to_pi(hw.family.tilde.tp[i]);
        LaurentPi r;
        if (m >= 0) {
            LaurentPi acc{1};
            for (long long t = 0; t < m; ++t) {
                r += acc;
                acc *= tp;
            }
        } else {
            LaurentPi inv = tp.inverted_monomial();
            LaurentPi acc = inv;
            for (long long t = 0; t < -m; ++t) {
                r -= acc;
                acc *= inv;
            }
            // r = -(tp^{-1} + ... + tp^{m}); reorder gives (1-tp^m)/(1-tp)
        }
        return rfs(r);
    }
    RatFuncSqrt chi = hw.k_eigen(i, beta);
    RatFuncSqrt pd = rfs(hw.family.theta.p_diag[i]);
    RatFuncSqrt pinv = rfs(hw.family.theta.p_diag[i].inverted_monomial());
    return (chi - chi.inverse()) / (pd - pinv);
}

}  // namespace

bool check_EF(const HWModule& hw, bool corrupt_comm_sign) {
    const size_t rank = hw.datum.rank;
    for (const ZVec& beta : hw.betas) {
        if (!hw.interior(beta)) continue;
        if (hw.dim_at(beta) == 0) continue;
        for (size_t i = 0; i < rank; ++i)
            for (size_t j = 0; j < rank; ++j) {
                ZVec up_j = beta;
                up_j[j] += 1;
                ZVec dn_i = beta;
                dn_i[i] -= 1;
                Mat<RatFuncSqrt> lhs = hw.emat(i, up_j) * hw.fmat(j, beta);
                Mat<RatFuncSqrt> rhs1 =
                    (dn_i[i] < 0)
                        ? Mat<RatFuncSqrt>(lhs.rows(), lhs.cols())
                        : hw.fmat(j, dn_i) * hw.emat(i, beta);
                Mat<RatFuncSqrt> diff =
                    lhs - rhs1.scaled(comm_coeff(hw, i, j, corrupt_comm_sign));
                if (i == j) {
                    RatFuncSqrt d = delta_scalar(hw, i, beta);
                    Mat<RatFuncSqrt> id =
                        Mat<RatFuncSqrt>::identity(hw.dim_at(beta)).scaled(d);
                    diff = diff - id;
                }
                if (!diff.is_zero()) return false;
            }
    }
    return true;
}

bool check_divided_powers(const HWModule& hw, unsigned n, unsigned m, size_t i) {
    if (hw.family.kind != HWFamily::Kind::Tilde)
        throw std::domain_error("check_divided_powers: tilde families only");
    const int d = static_cast<int>(hw.datum.d[i]);
    const int par = hw.datum.parity[i];
    const LaurentPi tp = to_pi(hw.family.tilde.tp[i]);
    auto tp_pow = [&](long long k) {
        LaurentPi r{1};
        LaurentPi base = k >= 0 ? tp : tp.inverted_monomial();
        for (long long t = 0; t < (k >= 0 ? k : -k); ++t) r *= base;
        return r;
    };
    auto fact = [&](unsigned t) { return rfs(gauss_pi_fact(t, d, par)); };

    for (const ZVec& beta : hw.betas) {
        if (zvec_height(beta) + static_cast<long long>(m) >
            static_cast<long long>(hw.cutoff))
            continue;
        if (hw.dim_at(beta) == 0) continue;
        long long hmu = hw.datum.pairing(i, hw.lambda) - hw.datum.root_pairing(i, beta);

        // LHS: e^{n} f^{m} with divided powers
        Mat<RatFuncSqrt> cur = Mat<RatFuncSqrt>::identity(hw.dim_at(beta));
        ZVec b = beta;
        for (unsigned t = 0; t < m; ++t) {
            cur = hw.fmat(i, b) * cur;
            b[i] += 1;
        }
        for (unsigned t = 0; t < n; ++t) {
            cur = hw.emat(i, b) * cur;
            b[i] -= 1;
        }
        Mat<RatFuncSqrt> lhs = cur.scaled(RatFuncSqrt(1) / (fact(n) * fact(m)));

        // RHS: sum over k
        ZVec tgt = beta;
        tgt[i] += static_cast<long long>(m) - static_cast<long long>(n);
        size_t tdim = (tgt[i] < 0) ? 0 : hw.dim_at(tgt);
        Mat<RatFuncSqrt> rhs(tdim, hw.dim_at(beta));
        for (unsigned k = 0; k <= std::min(n, m); ++k) {
            // q_i^{-k(k-n-m+1)} (q_i^2 pi_i)^{k(k+1)/2 - nm}
            long long kk = k;
            long long e1 = -d * kk * (kk - n - m + 1);
            LaurentPi scal = LaurentPi::q_pow(static_cast<int>(e1));
            scal *= tp_pow(kk * (kk + 1) / 2 - static_cast<long long>(n) * m);
            RatFuncSqrt coeff = rfs(scal);
            // binma((q^2 pi)^{n-m} K~; k) at K~ = tp^{hmu}
            long long xexp = static_cast<long long>(n) - m + hmu;
            RatFuncSqrt bin{1};
            for (unsigned r = 1; r <= k; ++r) {
                LaurentPi num = LaurentPi(1) - tp_pow(xexp + 1 - static_cast<long long>(r));
                LaurentPi den = LaurentPi(1) - tp_pow(r);
                bin = bin * (rfs(num) / rfs(den));
            }
            // f^{m-k} e^{n-k} with divided powers
            Mat<RatFuncSqrt> op = Mat<RatFuncSqrt>::identity(hw.dim_at(beta));
            ZVec bb = beta;
            bool dead = false;
            for (unsigned t = 0; t < n - k && !dead; ++t) {
                op = hw.emat(i, bb) * op;
                bb[i] -= 1;
                if (bb[i] < 0) dead = true;
            }
            if (dead && n - k > 0) {
                // e^{n-k} annihilated the block entirely: contribution zero
                continue;
            }
            for (unsigned t = 0; t < m - k; ++t) {
                op = hw.fmat(i, bb) * op;
                bb[i] += 1;
            }
            rhs = rhs + op.scaled(coeff * bin / (fact(n - k) * fact(m - k)));
        }
        if (!(lhs - rhs).is_zero()) return false;
    }
    return true;
}

namespace {

std::map<ZVec, long long> kostant_table(const CartanSuperdatum& dm, unsigned cutoff) {
    RootTable roots = positive_roots(dm, cutoff);
    std::vector<ZVec> box = betas_up_to(dm.rank, cutoff);
    std::map<ZVec, long long> p;
    for (const ZVec& b : box) p[b] = 0;
    p[ZVec(dm.rank, 0)] = 1;
    for (const auto& e : roots.entries) {
        if (zvec_height(e.beta) > static_cast<long long>(cutoff)) continue;
        for (long long mm = 0; mm < e.mult; ++mm) {
            for (const ZVec& b : box) {  // ascending height order
                ZVec prev = zvec_sub(b, e.beta);
                bool ok = true;
                for (long long v : prev) ok = ok && v >= 0;
                if (!ok) continue;
                p[b] += p[prev];
            }
        }
    }
    return p;
}

}  // namespace

std::map<ZVec, long long> weyl_kac_char(const CartanSuperdatum& dm, const ZVec& lambda,
                                        unsigned cutoff) {
    for (size_t i = 0; i < dm.rank; ++i)
        if (dm.pairing(i, lambda) < 0)
            throw std::domain_error("weyl_kac_char: lambda is not dominant");
    auto part = kostant_table(dm, cutoff);
    ZVec lr = zvec_add(lambda, dm.rho);
    auto w_elements = weyl_group(dm, cutoff);
    std::map<ZVec, long long> dims;
    for (const ZVec& b : betas_up_to(dm.rank, cutoff)) dims[b] = 0;
    for (const auto& w : w_elements) {
        // gamma_w = (Lambda + rho) - w(Lambda + rho), in root coordinates
        ZVec img(dm.pdim, 0);
        for (size_t r = 0; r < dm.pdim; ++r)
            for (size_t c = 0; c < dm.pdim; ++c) img[r] += w.action[r][c] * lr[c];
        ZVec diff = zvec_sub(lr, img);
        auto gw = root_coordinates(dm, ZVec(dm.pdim, 0), diff);
        if (!gw) throw std::logic_error("weyl_kac_char: w(L+rho)-(L+rho) not in Q");
        bool positive = true;
        long long h = 0;
        for (long long v : *gw) {
            positive = positive && v >= 0;
            h += v;
        }
        if (!positive)
            throw std::logic_error("weyl_kac_char: non-positive gamma_w for dominant lambda");
        if (h > static_cast<long long>(cutoff)) continue;
        for (auto& [beta, val] : dims) {
            ZVec arg = zvec_sub(beta, *gw);
            bool ok = true;
            for (long long v : arg) ok = ok && v >= 0;
            if (!ok) continue;
            auto it = part.find(arg);
            if (it != part.end()) val += w.sign * it->second;
        }
    }
    for (const auto& [beta, val] : dims)
        if (val < 0)
            throw std::logic_error("weyl_kac_char: negative coefficient");
    return dims;
}

long long nilpotency_bound(const CartanSuperdatum& dm, const ZVec& lambda, const ZVec& beta,
                           size_t i) {
    long long maxneg = 0;
    for (size_t j = 0; j < dm.rank; ++j)
        if (j != i) maxneg = std::max(maxneg, -dm.a[i][j]);
    return dm.pairing(i, lambda) + zvec_height(beta) * maxneg + 1;
}

HWModule to_theta_family(const HWModule& hw, const ThetaP& lift) {
    if (hw.family.kind != HWFamily::Kind::Tilde)
        throw std::domain_error("to_theta_family: source must be a tilde-family module");
    TildeThetaP derived = derive_tilde(lift);
    for (size_t i = 0; i < hw.datum.rank; ++i) {
        if (derived.tp[i] != hw.family.tilde.tp[i])
            throw std::domain_error("to_theta_family: lift does not square to tp");
        for (size_t j = 0; j < hw.datum.rank; ++j)
            if (derived.ttheta[i][j] != hw.family.tilde.ttheta[i][j])
                throw std::domain_error("to_theta_family: lift tilde data mismatch");
    }
    HWModule out = hw;
    out.family.kind = HWFamily::Kind::Theta;
    out.family.theta = lift;
    out.family.chi = chi_build(hw.datum, lift, hw.lambda);
    // e^theta acts as p_i p_ii^{-1} chi_i(mu)^{-1} e^tilde
    for (size_t i = 0; i < hw.datum.rank; ++i) {
        LaurentSqrt fac = lift.p_diag[i] * lift.p_off[i][i].inverted_monomial();
        for (auto& [beta, mat] : out.Emat[i]) {
            ZVec mu = zvec_sub(hw.lambda, hw.datum.root_to_weight(beta));
            RatFuncSqrt s =
                rfs(fac * out.family.chi.eval(hw.datum, i, mu).inverted_monomial());
            mat = mat.scaled(s);
        }
    }
    return out;
}

GaugeCharacters gauge_solve(const ThetaP& from, const ThetaP& to,
                            const CartanSuperdatum& dm) {
    if (!gauge_equivalent(from, to, dm))
        throw std::domain_error("gauge_solve: families are not in the same gauge class");
    const size_t n = dm.rank;
    GaugeCharacters gc;
    gc.x.assign(n, std::vector<LaurentSqrt>(n, LaurentSqrt(1)));
    gc.y.assign(n, std::vector<LaurentSqrt>(n));
    gc.eps.assign(n, std::vector<LaurentSqrt>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            gc.eps[i][j] = to.p_off[i][j] * from.p_off[i][j].inverted_monomial();
            if (gc.eps[i][j].pow(2) != LaurentSqrt(1))
                throw std::logic_error("gauge_solve: eps_ij^2 != 1");
        }
    for (size_t i = 0; i < n; ++i) {
        if (to.theta[i][i] * from.theta[i][i].inverted_monomial() != gc.eps[i][i])
            throw std::logic_error("gauge_solve: theta_ii inconsistency");
        for (size_t j = i + 1; j < n; ++j) {
            LaurentSqrt r = to.theta[i][j] * from.theta[i][j].inverted_monomial() *
                            gc.eps[i][j].inverted_monomial();
            LaurentSqrt rj = to.theta[j][i] * from.theta[j][i].inverted_monomial() *
                             gc.eps[j][i].inverted_monomial();
            if (r * rj != LaurentSqrt(1))
                throw std::logic_error("gauge_solve: r_ij r_ji != 1");
            // x_ij = 1 (i < j), x_ji = r_ij
            gc.x[j][i] = r;
        }
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            gc.y[i][j] = gc.eps[i][j] * gc.x[i][j].inverted_monomial();
    for (size_t i = 0; i < n; ++i) {
        RatFuncSqrt num = rfs(to.p_diag[i] - to.p_diag[i].inverted_monomial());
        RatFuncSqrt den = rfs(from.p_diag[i] - from.p_diag[i].inverted_monomial());
        gc.c.push_back(rfs(gc.x[i][i]) * num / den);
    }
    // both routes to theta' agree: eps_ji y_ij y_ji^{-1} theta_ij == theta'_ij
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            LaurentSqrt lhs = gc.eps[j][i] * gc.y[i][j] *
                              gc.y[j][i].inverted_monomial() * from.theta[i][j];
            if (lhs != to.theta[i][j])
                throw std::logic_error("gauge_solve: y-route check failed");
        }
    return gc;
}

HWModule gauge_transform(const HWModule& hw, const ThetaP& to) {
    if (hw.family.kind != HWFamily::Kind::Theta)
        throw std::domain_error("gauge_transform: source must be a theta-family module");
    GaugeCharacters gc = gauge_solve(hw.family.theta, to, hw.datum);
    HWModule out = hw;
    out.family.theta = to;
    out.family.chi.pij = to.p_off;  // chi' = chi * prod eps^{m_j}
    const size_t n = hw.datum.rank;
    auto mono = [&](const std::vector<std::vector<LaurentSqrt>>& tbl, size_t i,
                    const ZVec& beta) {
        LaurentSqrt v{1};
        for (size_t j = 0; j < n; ++j)
            if (beta[j] != 0) v *= lpow(tbl[i][j], -beta[j]);
        return v;
    };
    for (size_t i = 0; i < n; ++i) {
        for (auto& [beta, mat] : out.Emat[i]) mat = mat.scaled(rfs(mono(gc.x, i, beta)));
        for (auto& [beta, mat] : out.Fmat[i])
            mat = mat.scaled(gc.c[i] * rfs(mono(gc.y, i, beta)));
    }
    return out;
}

CasimirContext casimir_build(const HWModule& hw, UMinusContext& ub) {
    if (hw.family.kind != HWFamily::Kind::Theta)
        throw std::domain_error("casimir_build: need a theta-family (boldU) module");
    const CartanSuperdatum& dm = hw.datum;
    const size_t n = dm.rank;
    const ThetaP& th = hw.family.theta;
    CasimirContext cas;

    // t-function exponents on Lambda - Q, t(Lambda) = 1
    for (const ZVec& beta : hw.betas) {
        if (zvec_height(beta) == 0) {
            cas.t_exponent[beta] = 0;
            continue;
        }
        std::optional<int> e;
        for (size_t i = 0; i < n; ++i) {
            if (beta[i] == 0) continue;
            ZVec prev = beta;
            prev[i] -= 1;
            // t(lam - alpha_i) = t(lam) pi_i^{-<h_i, lam>}, lam = Lambda - prev
            long long hl = dm.pairing(i, hw.lambda) - dm.root_pairing(i, prev);
            int bit = (cas.t_exponent.at(prev) +
                       static_cast<int>(((hl % 2) + 2) % 2) * dm.parity[i]) %
                      2;
            if (e && *e != bit)
                throw std::logic_error("casimir_build: t-function path dependence");
            e = bit;
        }
        cas.t_exponent[beta] = *e;
    }

    // Psi(-gamma) by the defining recursion, path independence asserted
    std::map<ZVec, RatFuncSqrt> psi;
    auto a_scalar = [&](size_t i, const ZVec& beta) {
        // a_i(-beta) = prod_j theta_ji^{beta_j} * p_i^{<h_i, beta>}
        LaurentSqrt v = lpow(th.p_diag[i], dm.root_pairing(i, beta));
        for (size_t j = 0; j < n; ++j)
            if (beta[j] != 0) v *= lpow(th.theta[j][i], beta[j]);
        return v;
    };
    for (const ZVec& beta : hw.betas) {
        if (zvec_height(beta) == 0) {
            psi[beta] = RatFuncSqrt(1);
            continue;
        }
        std::optional<RatFuncSqrt> val;
        for (size_t i = 0; i < n; ++i) {
            if (beta[i] == 0) continue;
            ZVec prev = beta;
            prev[i] -= 1;
            RatFuncSqrt v = psi.at(prev) * rfs(a_scalar(i, prev).inverted_monomial());
            if (val && !(*val == v))
                throw std::logic_error("casimir_build: Psi path dependence");
            val = v;
        }
        psi[beta] = *val;
    }
    cas.psi = psi;

    // dual bases of U^- per weight, boldU normalization
    struct DualData {
        std::vector<Word> pivots;
        Mat<RatFuncSqrt> inv_gram;  // inverse of the boldU pivot Gram
    };
    std::map<ZVec, DualData> dual;
    for (const ZVec& gamma : hw.betas) {
        const Mat<LaurentPi>& g = ub.gram(gamma);
        size_t r = ub.weight_dim(gamma);
        auto cols = select_pivot_columns(g, r);
        if (!cols) throw std::logic_error("casimir_build: U^- pivot selection failed");
        DualData dd;
        for (size_t c : *cols) dd.pivots.push_back(ub.words_at(gamma)[c]);
        // invert the e'-normalized pivot Gram componentwise
        Mat<RatFunc> gp(r, r), gm(r, r);
        for (size_t a = 0; a < r; ++a)
            for (size_t b = 0; b < r; ++b) {
                gp(a, b) = RatFunc::from_laurent(
                    specialize_pi(g((*cols)[a], (*cols)[b]), +1));
                gm(a, b) = RatFunc::from_laurent(
                    specialize_pi(g((*cols)[a], (*cols)[b]), -1));
            }
        auto ip = invert(gp), im = invert(gm);
        if (!ip || !im)
            throw std::logic_error("casimir_build: Gram not invertible at a needed weight");
        // boldU form = s(gamma) * e'-form with
        // s(gamma) = prod_i (p_i - p_i^{-1})^{-gamma_i}; its inverse scales back
        RatFuncSqrt sinv{1};
        for (size_t i = 0; i < n; ++i)
            for (long long t = 0; t < gamma[i]; ++t)
                sinv = sinv * rfs(th.p_diag[i] - th.p_diag[i].inverted_monomial());
        dd.inv_gram = Mat<RatFuncSqrt>(r, r);
        for (size_t a = 0; a < r; ++a)
            for (size_t b = 0; b < r; ++b)
                dd.inv_gram(a, b) = RatFuncSqrt(RatFuncPi((*ip)(a, b), (*im)(a, b))) * sinv;
        dual.emplace(gamma, std::move(dd));
    }

    auto chi_at = [&](size_t i, const ZVec& beta) {
        ZVec mu = zvec_sub(hw.lambda, dm.root_to_weight(beta));
        return rfs(hw.family.chi.eval(dm, i, mu));
    };

    // Phi per block, then the normalized weight scalar
    for (const ZVec& beta : hw.betas) {
        size_t dim = hw.dim_at(beta);
        if (dim == 0) {
            cas.omega_hat.emplace(beta, Mat<RatFuncSqrt>(0, 0));
            continue;
        }
        Mat<RatFuncSqrt> phi(dim, dim);
        for (const auto& [gamma, dd] : dual) {
            bool inside = true;
            for (size_t k = 0; k < n; ++k) inside = inside && gamma[k] <= beta[k];
            if (!inside || dd.pivots.empty()) continue;
            size_t r = dd.pivots.size();
            // psi(A_nu)-operators: block beta -> beta - gamma
            std::vector<Mat<RatFuncSqrt>> psi_ops;
            for (const Word& a : dd.pivots) {
                Mat<RatFuncSqrt> cur = Mat<RatFuncSqrt>::identity(dim);
                ZVec cb = beta;
                for (size_t t = a.size(); t-- > 0;) {
                    size_t li = a[t];
                    cur = hw.emat(li, cb) * cur;
                    cb[li] -= 1;
                    cur = cur.scaled(chi_at(li, cb));
                }
                psi_ops.push_back(std::move(cur));
            }
            // word operators f_{w}: block beta-gamma -> beta
            std::vector<Mat<RatFuncSqrt>> word_ops;
            for (const Word& w : dd.pivots) {
                ZVec cb = zvec_sub(beta, gamma);
                Mat<RatFuncSqrt> cur = Mat<RatFuncSqrt>::identity(hw.dim_at(cb));
                for (size_t t = w.size(); t-- > 0;) {
                    size_t li = w[t];
                    cur = hw.fmat(li, cb) * cur;
                    cb[li] += 1;
                }
                word_ops.push_back(std::move(cur));
            }
            for (size_t nu = 0; nu < r; ++nu) {
                // A'_nu = sum_m invG[m][nu] w_m
                Mat<RatFuncSqrt> aop(dim, hw.dim_at(zvec_sub(beta, gamma)));
                for (size_t m = 0; m < r; ++m)
                    aop = aop + word_ops[m].scaled(dd.inv_gram(m, nu));
                phi = phi + (aop * psi_ops[nu]).scaled(psi.at(gamma));
            }
        }
        // Xi-hat scalar: t * q^{(beta|beta) - 2(Lambda+rho|beta)}
        long long e = dm.root_form(beta, beta);
        ZVec lr = zvec_add(hw.lambda, dm.rho);
        for (size_t i = 0; i < n; ++i) e -= 2 * beta[i] * dm.d[i] * dm.pairing(i, lr);
        RatFuncSqrt xi = rfs(LaurentPi::monomial(
            static_cast<int>(e), PiScalar::pi_pow(cas.t_exponent.at(beta))));
        cas.omega_hat.emplace(beta, phi.scaled(xi));
    }
    return cas;
}

bool casimir_check(const HWModule& hw, const CasimirContext& cas) {
    for (const ZVec& beta : hw.betas) {
        const auto& om = cas.omega_hat.at(beta);
        if (om.rows() != om.cols()) return false;
        if (!(om - Mat<RatFuncSqrt>::identity(om.rows())).is_zero()) return false;
    }
    // commutation with E_i and F_i on interior blocks
    for (const ZVec& beta : hw.betas) {
        if (!hw.interior(beta)) continue;
        for (size_t i = 0; i < hw.datum.rank; ++i) {
            ZVec up = beta;
            up[i] += 1;
            Mat<RatFuncSqrt> f = hw.fmat(i, beta);
            if (!(cas.omega_hat.at(up) * f - f * cas.omega_hat.at(beta)).is_zero())
                return false;
            if (beta[i] > 0) {
                ZVec dn = beta;
                dn[i] -= 1;
                Mat<RatFuncSqrt> e = hw.emat(i, beta);
                if (!(cas.omega_hat.at(dn) * e - e * cas.omega_hat.at(beta)).is_zero())
                    return false;
            }
        }
    }
    return true;
}

}  // namespace qkms
