#include "qkms/uminus.hpp"

#include <algorithm>
#include <functional>
#include <thread>

namespace qkms {

ZVec word_weight(size_t rank, const Word& w) {
    ZVec b(rank, 0);
    for (uint8_t l : w) b[l] += 1;
    return b;
}

std::string word_str(const Word& w) {
    std::string s;
    for (uint8_t l : w) {
        if (!s.empty()) s += ".";
        s += "f" + std::to_string(l + 1);
    }
    return s.empty() ? "1" : s;
}

void UMinusElt::add(const Word& w, const RatFuncPi& c) {
    if (c.is_zero()) return;
    auto it = terms.find(w);
    if (it == terms.end()) {
        terms.emplace(w, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

UMinusElt UMinusElt::operator+(const UMinusElt& o) const {
    UMinusElt r = *this;
    for (const auto& [w, c] : o.terms) r.add(w, c);
    return r;
}

UMinusElt UMinusElt::operator-(const UMinusElt& o) const {
    UMinusElt r = *this;
    for (const auto& [w, c] : o.terms) r.add(w, -c);
    return r;
}

UMinusElt UMinusElt::scaled(const RatFuncPi& c) const {
    UMinusElt r;
    if (c.is_zero()) return r;
    for (const auto& [w, x] : terms) r.add(w, x * c);
    return r;
}

BosonParams BosonParams::from_tilde(const CartanSuperdatum& datum, const TildeThetaP& tilde) {
    BosonParams bp;
    bp.datum = datum;
    bp.family = tilde.name;
    const size_t n = datum.rank;
    bp.ttheta.assign(n, std::vector<LaurentPi>(n));
    for (size_t i = 0; i < n; ++i) {
        bp.tp.push_back(to_pi(tilde.tp[i]));
        for (size_t j = 0; j < n; ++j) bp.ttheta[i][j] = to_pi(tilde.ttheta[i][j]);
    }
    return bp;
}

UMinusContext::UMinusContext(BosonParams params, unsigned jobs)
    : params_(std::move(params)), jobs_(jobs == 0 ? 1 : jobs) {}

std::vector<Word> enumerate_words(size_t rank, const ZVec& beta) {
    std::vector<Word> words;
    Word cur;
    std::function<void(ZVec&)> gen = [&](ZVec& left) {
        bool done = true;
        for (size_t i = 0; i < rank; ++i) {
            if (left[i] > 0) {
                done = false;
                left[i] -= 1;
                cur.push_back(static_cast<uint8_t>(i));
                gen(left);
                cur.pop_back();
                left[i] += 1;
            }
        }
        if (done) words.push_back(cur);
    };
    ZVec left = beta;
    gen(left);
    std::sort(words.begin(), words.end());
    return words;
}

const std::vector<Word>& UMinusContext::words_at(const ZVec& beta) {
    auto it = words_cache_.find(beta);
    if (it != words_cache_.end()) return it->second;
    return words_cache_.emplace(beta, enumerate_words(datum().rank, beta)).first->second;
}

std::map<Word, LaurentPi> UMinusContext::eprime_word(size_t i, const Word& w) {
    auto key = std::make_pair(i, w);
    auto it = eprime_cache_.find(key);
    if (it != eprime_cache_.end()) return it->second;
    std::map<Word, LaurentPi> out;
    if (!w.empty()) {
        const size_t j = w[0];
        Word rest(w.begin() + 1, w.end());
        if (i == j) out[rest] = LaurentPi(1);
        const LaurentPi& t = params_.ttheta[j][i];  // ttheta_{ji}
        for (const auto& [z, c] : eprime_word(i, rest)) {
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
    }
    return eprime_cache_.emplace(std::move(key), std::move(out)).first->second;
}

std::map<Word, LaurentPi> UMinusContext::estar_word(size_t i, const Word& w) {
    // e_i^*(f_j w') = f_j e_i^*(w') + delta_ij AdScalar(i, w') w',
    // AdScalar(i, w') = prod_t ttheta_{i, w'_t}
    std::map<Word, LaurentPi> out;
    std::vector<LaurentPi> ad_suffix(w.size() + 1, LaurentPi(1));
    for (size_t k = w.size(); k-- > 0;)
        ad_suffix[k] = ad_suffix[k + 1] * params_.ttheta[i][w[k]];
    for (size_t k = 0; k < w.size(); ++k) {
        if (w[k] != i) continue;
        Word del;
        del.reserve(w.size() - 1);
        del.insert(del.end(), w.begin(), w.begin() + static_cast<long>(k));
        del.insert(del.end(), w.begin() + static_cast<long>(k) + 1, w.end());
        auto it = out.find(del);
        if (it == out.end()) out.emplace(std::move(del), ad_suffix[k + 1]);
        else it->second += ad_suffix[k + 1];
    }
    return out;
}

std::map<Word, LaurentPi> UMinusContext::estar_word_rightscan(size_t i, const Word& w) {
    // e_i^*(w' f_j) = (e_i^* w') ttheta_ij f_j + delta_ij w'
    std::map<Word, LaurentPi> out;
    if (w.empty()) return out;
    const size_t j = w.back();
    Word front(w.begin(), w.end() - 1);
    if (i == j) out[front] = LaurentPi(1);
    for (const auto& [z, c] : estar_word_rightscan(i, front)) {
        Word zj = z;
        zj.push_back(static_cast<uint8_t>(j));
        LaurentPi v = c * params_.ttheta[i][j];
        auto it = out.find(zj);
        if (it == out.end()) out.emplace(std::move(zj), std::move(v));
        else it->second += v;
    }
    return out;
}

UMinusElt UMinusContext::eprime(size_t i, const UMinusElt& x) {
    UMinusElt out;
    for (const auto& [w, c] : x.terms)
        for (const auto& [z, l] : eprime_word(i, w))
            out.add(z, c * RatFuncPi::from_laurent(l));
    return out;
}

UMinusElt UMinusContext::estar(size_t i, const UMinusElt& x) {
    UMinusElt out;
    for (const auto& [w, c] : x.terms)
        for (const auto& [z, l] : estar_word(i, w))
            out.add(z, c * RatFuncPi::from_laurent(l));
    return out;
}

const Mat<LaurentPi>& UMinusContext::gram(const ZVec& beta) {
    auto it = gram_cache_.find(beta);
    if (it != gram_cache_.end()) return it->second;
    const auto& words = words_at(beta);
    const size_t n = words.size();
    Mat<LaurentPi> g(n, n);
    if (zvec_height(beta) == 0) {
        if (n == 1) g(0, 0) = LaurentPi(1);
        return gram_cache_.emplace(beta, std::move(g)).first->second;
    }
    // peel the first letter of the column word and contract with the
    // previous-height Gram matrix
    std::map<size_t, const Mat<LaurentPi>*> prev;  // per first letter j
    std::map<size_t, const std::vector<Word>*> prev_words;
    for (size_t j = 0; j < datum().rank; ++j) {
        if (beta[j] == 0) continue;
        ZVec sub = beta;
        sub[j] -= 1;
        prev[j] = &gram(sub);
        prev_words[j] = &words_at(sub);
    }
    // e_j'-expansions of all row words, indexed against prev word lists
    std::map<size_t, std::vector<std::vector<std::pair<size_t, LaurentPi>>>> expm;
    for (auto& [j, pw] : prev_words) {
        std::map<Word, size_t> index;
        for (size_t k = 0; k < pw->size(); ++k) index[(*pw)[k]] = k;
        auto& rows = expm[j];
        rows.resize(n);
        for (size_t r = 0; r < n; ++r)
            for (const auto& [z, c] : eprime_word(j, words[r]))
                rows[r].emplace_back(index.at(z), c);
    }
    auto compute_entry = [&](size_t r, size_t cidx) {
        const Word& y = words[cidx];
        const size_t j = y[0];
        Word rest(y.begin() + 1, y.end());
        const auto& pw = *prev_words.at(j);
        size_t rest_idx = static_cast<size_t>(
            std::lower_bound(pw.begin(), pw.end(), rest) - pw.begin());
        LaurentPi v;
        for (const auto& [zi, c] : expm.at(j)[r]) v += c * (*prev.at(j))(zi, rest_idx);
        g(r, cidx) = std::move(v);
    };
    if (jobs_ <= 1 || n < 4) {
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) compute_entry(r, c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        const size_t total = n * n;
        for (unsigned t = 0; t < jobs_; ++t)
            pool.emplace_back([&] {
                size_t k;
                while ((k = next.fetch_add(1)) < total) compute_entry(k / n, k % n);
            });
        for (auto& th : pool) th.join();
    }
    return gram_cache_.emplace(beta, std::move(g)).first->second;
}

LaurentPi UMinusContext::form_words(const Word& w1, const Word& w2) {
    ZVec b1 = word_weight(datum().rank, w1), b2 = word_weight(datum().rank, w2);
    if (b1 != b2) return LaurentPi{};
    const auto& words = words_at(b1);
    size_t i1 = static_cast<size_t>(std::lower_bound(words.begin(), words.end(), w1) - words.begin());
    size_t i2 = static_cast<size_t>(std::lower_bound(words.begin(), words.end(), w2) - words.begin());
    return gram(b1)(i1, i2);
}

RatFuncPi UMinusContext::form(const UMinusElt& x, const UMinusElt& y) {
    RatFuncPi out;
    for (const auto& [w1, c1] : x.terms)
        for (const auto& [w2, c2] : y.terms) {
            LaurentPi f = form_words(w1, w2);
            if (f.is_zero()) continue;
            out += c1 * c2 * RatFuncPi::from_laurent(f);
        }
    return out;
}

size_t UMinusContext::weight_dim(const ZVec& beta) {
    const Mat<LaurentPi>& g = gram(beta);
    size_t rp = rank_at_pi(g, +1);
    size_t rm = rank_at_pi(g, -1);
    if (rp != rm)
        throw std::logic_error("weight_dim: pi-component ranks disagree at " +
                               std::to_string(rp) + " vs " + std::to_string(rm));
    size_t re1 = eval_rank_at_pi(g, +1, Rat(13, 5));
    size_t re2 = eval_rank_at_pi(g, -1, Rat(13, 5));
    if (re1 != rp || re2 != rm)
        throw std::logic_error("weight_dim: evaluation rank disagrees with symbolic rank");
    return rp;
}

LaurentPi UMinusContext::tp_pow(size_t i, long long k) const {
    const LaurentPi& t = params_.tp[i];
    LaurentPi r{1};
    if (k >= 0) {
        for (long long s = 0; s < k; ++s) r *= t;
    } else {
        LaurentPi inv = t.inverted_monomial();
        for (long long s = 0; s < -k; ++s) r *= inv;
    }
    return r;
}

LaurentPi UMinusContext::tilde_int(size_t i, unsigned n) const {
    LaurentPi r;
    for (unsigned t = 0; t < n; ++t) r += tp_pow(i, t);
    return r;
}

LaurentPi UMinusContext::tilde_fact(size_t i, unsigned n) const {
    LaurentPi r{1};
    for (unsigned t = 2; t <= n; ++t) r *= tilde_int(i, t);
    return r;
}

bool UMinusContext::eprime_power_check(size_t i, size_t j, unsigned n,
                                       unsigned height_cutoff) {
    // coefficient p_i^{1-n} [n]_{p_i, p_i^{-1}} = sum_{k<n} tp_i^{-k}
    LaurentPi coeff;
    for (unsigned k = 0; k < n; ++k) coeff += tp_pow(i, -static_cast<long long>(k));
    LaurentPi tpow{1};
    for (unsigned k = 0; k < n; ++k) tpow *= params_.ttheta[j][i];

    auto apply_eprime_n = [&](const Word& w, unsigned m) {
        std::map<Word, LaurentPi> cur;
        cur[w] = LaurentPi(1);
        for (unsigned t = 0; t < m; ++t) {
            std::map<Word, LaurentPi> nxt;
            for (const auto& [x, c] : cur)
                for (const auto& [z, d] : eprime_word(i, x)) {
                    auto it = nxt.find(z);
                    if (it == nxt.end()) nxt.emplace(z, c * d);
                    else it->second += c * d;
                }
            for (auto it = nxt.begin(); it != nxt.end();)
                it = it->second.is_zero() ? nxt.erase(it) : std::next(it);
            cur = std::move(nxt);
        }
        return cur;
    };

    std::vector<Word> samples;
    for (unsigned h = 0; h <= height_cutoff; ++h) {
        // all words over the full alphabet of height h would blow up; use
        // words in the letters {i, j} which carry the whole identity
        std::function<void(Word&)> gen = [&](Word& w) {
            if (w.size() == h) { samples.push_back(w); return; }
            for (size_t l : {i, j}) {
                w.push_back(static_cast<uint8_t>(l));
                gen(w);
                w.pop_back();
            }
        };
        Word w;
        gen(w);
    }
    for (const Word& w : samples) {
        Word fw;
        fw.push_back(static_cast<uint8_t>(j));
        fw.insert(fw.end(), w.begin(), w.end());
        auto lhs = apply_eprime_n(fw, n);
        std::map<Word, LaurentPi> rhs;
        for (const auto& [z, c] : apply_eprime_n(w, n)) {
            Word fz;
            fz.push_back(static_cast<uint8_t>(j));
            fz.insert(fz.end(), z.begin(), z.end());
            rhs[fz] = c * tpow;
        }
        if (i == j)
            for (const auto& [z, c] : apply_eprime_n(w, n - 1)) {
                auto it = rhs.find(z);
                if (it == rhs.end()) rhs.emplace(z, c * coeff);
                else it->second += c * coeff;
            }
        for (auto it = rhs.begin(); it != rhs.end();)
            it = it->second.is_zero() ? rhs.erase(it) : std::next(it);
        if (lhs != rhs) return false;
    }
    return true;
}

UMinusElt UMinusContext::serre_element(size_t i, size_t j) {
    if (i == j) throw std::domain_error("serre_element: need i != j");
    const long long aij = datum().a[i][j];
    const unsigned b = static_cast<unsigned>(1 - aij);
    UMinusElt out;
    LaurentPi mth = -params_.ttheta[j][i];  // -ttheta_ji
    for (unsigned k = 0; k <= b; ++k) {
        // (-ttheta_ji)^{-k} tp_i^{k(k-1)/2} / ([b-k]~! [k]~!)
        LaurentPi mono{1};
        LaurentPi mi = mth.inverted_monomial();
        for (unsigned t = 0; t < k; ++t) mono *= mi;
        mono *= tp_pow(i, static_cast<long long>(k) * (static_cast<long long>(k) - 1) / 2);
        RatFuncPi c = RatFuncPi::from_laurent(mono) /
                      RatFuncPi::from_laurent(tilde_fact(i, b - k) * tilde_fact(i, k));
        Word w;
        for (unsigned t = 0; t < b - k; ++t) w.push_back(static_cast<uint8_t>(i));
        w.push_back(static_cast<uint8_t>(j));
        for (unsigned t = 0; t < k; ++t) w.push_back(static_cast<uint8_t>(i));
        out.add(w, c);
    }
    return out;
}

bool UMinusContext::serre_in_radical(size_t i, size_t j) {
    UMinusElt s = serre_element(i, j);
    ZVec beta(datum().rank, 0);
    beta[i] = 1 - datum().a[i][j];
    beta[j] += 1;
    for (const Word& w : words_at(beta))
        if (!form(s, UMinusElt::word(w)).is_zero()) return false;
    return true;
}

namespace {

// p_i^{k a_ij} [b choose k]_{p_i, p_i^{-1}} lies in Z[tp_i^{+-1}]; compute it
// symbolically in s = p_i and substitute s^2 -> tp_i.
LaurentPi even_part_to_tp(const Laurent& in_s, const LaurentPi& tp) {
    LaurentPi out;
    LaurentPi tinv = tp.inverted_monomial();
    for (const auto& [e, c] : in_s.terms()) {
        if (e % 2 != 0) throw std::logic_error("expected only even powers of p_i");
        long long t = e / 2;
        LaurentPi pw{1};
        if (t >= 0)
            for (long long s = 0; s < t; ++s) pw *= tp;
        else
            for (long long s = 0; s < -t; ++s) pw *= tinv;
        out += pw.scaled(PiScalar(c));
    }
    return out;
}

}  // namespace

bool UMinusContext::boson_relation_check(unsigned height_cutoff) {
    const size_t n = datum().rank;
    // commutation e_i' e_j^* = e_j^* e_i' on all words up to the cutoff
    std::vector<Word> all;
    std::function<void(Word&)> gen = [&](Word& w) {
        if (w.size() >= 1) all.push_back(w);
        if (w.size() == height_cutoff) return;
        for (size_t l = 0; l < n; ++l) {
            w.push_back(static_cast<uint8_t>(l));
            gen(w);
            w.pop_back();
        }
    };
    Word w0;
    gen(w0);
    for (const Word& w : all)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                std::map<Word, LaurentPi> lhs, rhs;
                for (const auto& [z, c] : estar_word(j, w))
                    for (const auto& [z2, c2] : eprime_word(i, z)) {
                        auto it = lhs.find(z2);
                        if (it == lhs.end()) lhs.emplace(z2, c * c2);
                        else it->second += c * c2;
                    }
                for (const auto& [z, c] : eprime_word(i, w))
                    for (const auto& [z2, c2] : estar_word(j, z)) {
                        auto it = rhs.find(z2);
                        if (it == rhs.end()) rhs.emplace(z2, c * c2);
                        else it->second += c * c2;
                    }
                for (auto* m : {&lhs, &rhs})
                    for (auto it = m->begin(); it != m->end();)
                        it = it->second.is_zero() ? m->erase(it) : std::next(it);
                if (lhs != rhs) return false;
            }

    // e'-Serre: sum_k (-ttheta_ij p_i^{a_ij})^k [b choose k]_p e'^{b-k} e_j' e'^k = 0
    Laurent s = Laurent::q_pow(1), sinv = Laurent::q_pow(-1);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const long long aij = datum().a[i][j];
            const unsigned b = static_cast<unsigned>(1 - aij);
            std::vector<LaurentPi> coeff(b + 1);
            for (unsigned k = 0; k <= b; ++k) {
                Laurent sym = qbinom(b, k, s, sinv);
                // shift by p_i^{k a_ij}
                sym = sym.shifted(static_cast<int>(static_cast<long long>(k) * aij));
                LaurentPi c = even_part_to_tp(sym, params_.tp[i]);
                LaurentPi th{1};
                for (unsigned t = 0; t < k; ++t) th *= params_.ttheta[i][j];
                c *= th;
                if (k % 2 == 1) c = -c;
                coeff[k] = c;
            }
            for (const Word& w : all) {
                std::map<Word, LaurentPi> acc;
                for (unsigned k = 0; k <= b; ++k) {
                    std::map<Word, LaurentPi> cur;
                    cur[w] = coeff[k];
                    auto step = [&](size_t idx) {
                        std::map<Word, LaurentPi> nxt;
                        for (const auto& [x, c] : cur)
                            for (const auto& [z, d] : eprime_word(idx, x)) {
                                auto it = nxt.find(z);
                                if (it == nxt.end()) nxt.emplace(z, c * d);
                                else it->second += c * d;
                            }
                        cur = std::move(nxt);
                    };
                    for (unsigned t = 0; t < k; ++t) step(i);
                    step(j);
                    for (unsigned t = 0; t < b - k; ++t) step(i);
                    for (const auto& [z, c] : cur) {
                        auto it = acc.find(z);
                        if (it == acc.end()) acc.emplace(z, c);
                        else it->second += c;
                    }
                }
                for (const auto& [z, c] : acc)
                    if (!c.is_zero()) return false;
            }
        }
    return true;
}

long long UMinusContext::product_formula_dim(const ZVec& beta, size_t root_height_cutoff) {
    if (!roots_cache_)
        roots_cache_ = positive_roots(datum(), std::max<size_t>(root_height_cutoff,
                                                                static_cast<size_t>(zvec_height(beta))));
    // dynamic programming over (roots with multiplicity) as geometric factors
    std::map<ZVec, long long> part;
    ZVec zero(datum().rank, 0);
    part[zero] = 1;
    auto leq = [&](const ZVec& x, const ZVec& y) {
        for (size_t k = 0; k < x.size(); ++k)
            if (x[k] > y[k]) return false;
        return true;
    };
    for (const auto& e : roots_cache_->entries) {
        if (!leq(e.beta, beta)) continue;
        for (long long m = 0; m < e.mult; ++m) {
            // multiply by 1/(1 - e^{-alpha}): prefix sums along alpha direction
            std::map<ZVec, long long> nxt;
            std::function<void(ZVec&, size_t)> iterate = [&](ZVec& v, size_t pos) {
                if (pos == v.size()) {
                    long long total = 0;
                    ZVec u = v;
                    while (true) {
                        auto it = part.find(u);
                        if (it != part.end()) total += it->second;
                        bool ok = true;
                        for (size_t k = 0; k < u.size(); ++k) {
                            u[k] -= e.beta[k];
                            if (u[k] < 0) ok = false;
                        }
                        if (!ok) break;
                    }
                    if (total != 0) nxt[v] = total;
                    return;
                }
                for (long long x = 0; x <= beta[pos]; ++x) {
                    v[pos] = x;
                    iterate(v, pos + 1);
                }
            };
            ZVec v(datum().rank, 0);
            iterate(v, 0);
            part = std::move(nxt);
        }
    }
    auto it = part.find(beta);
    return it == part.end() ? 0 : it->second;
}

std::vector<LatticeFormEntry> divided_form_report(UMinusContext& ctx, const ZVec& beta) {
    std::vector<LatticeFormEntry> out;
    const auto& words = ctx.words_at(beta);
    auto run_factor = [&](const Word& w) {
        // product of [m]~! over maximal runs of a repeated letter
        LaurentPi f{1};
        size_t k = 0;
        while (k < w.size()) {
            size_t len = 1;
            while (k + len < w.size() && w[k + len] == w[k]) ++len;
            f *= ctx.tilde_fact(w[k], static_cast<unsigned>(len));
            k += len;
        }
        return f;
    };
    for (const Word& w1 : words)
        for (const Word& w2 : words) {
            RatFuncPi v = RatFuncPi::from_laurent(ctx.form_words(w1, w2)) /
                          RatFuncPi::from_laurent(run_factor(w1) * run_factor(w2));
            out.push_back({w1, w2, v, v.as_laurent_pi().has_value()});
        }
    return out;
}

}  // namespace qkms
