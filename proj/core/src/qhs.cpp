#include "qkms/qhs.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

namespace qkms {

Perm perm_identity(size_t n) {
    Perm p(n);
    for (size_t k = 0; k < n; ++k) p[k] = static_cast<uint8_t>(k);
    return p;
}

Perm perm_compose(const Perm& f, const Perm& g) {
    Perm h(f.size());
    for (size_t k = 0; k < f.size(); ++k) h[k] = f[g[k]];
    return h;
}

Perm perm_of_word(size_t n, const std::vector<uint8_t>& word) {
    Perm p = perm_identity(n);
    for (uint8_t a : word) {
        Perm s = perm_identity(n);
        std::swap(s[a], s[a + 1]);
        p = perm_compose(p, s);
    }
    return p;
}

size_t perm_length(const Perm& p) {
    size_t inv = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return inv;
}

std::vector<std::tuple<int, int, Rat>> QParams::q_poly(size_t i, size_t j) const {
    if (i == j) return {};
    if (i < j) {
        auto it = q.find({i, j});
        return it == q.end() ? std::vector<std::tuple<int, int, Rat>>{} : it->second;
    }
    auto it = q.find({j, i});
    std::vector<std::tuple<int, int, Rat>> out;
    if (it == q.end()) return out;
    for (const auto& [r, s, c] : it->second) out.emplace_back(s, r, c);
    return out;
}

std::optional<Violation> validate(const QParams& p) {
    const auto& dm = p.datum;
    for (size_t i = 0; i < dm.rank; ++i)
        for (size_t j = i + 1; j < dm.rank; ++j) {
            auto poly = p.q_poly(i, j);
            bool lead = false;
            for (const auto& [r, s, c] : poly) {
                if (c == 0) continue;
                long long degree0 = 2 * dm.d[i] * dm.a[i][j] + r * 2 * dm.d[i] + s * 2 * dm.d[j];
                if (degree0 != 0)
                    return Violation{"t degree", "t_{i,j;(r,s)} outside degree 0"};
                if (dm.parity[i] == 1 && r % 2 != 0)
                    return Violation{"t parity", "odd power of x1 with i odd"};
                if (dm.parity[j] == 1 && s % 2 != 0)
                    return Violation{"t parity", "odd power of x2 with j odd"};
                if (r == -dm.a[i][j] && s == 0) lead = c != 0;
            }
            if (!lead)
                return Violation{"t invertibility", "t_{i,j;(-a_ij,0)} must be invertible"};
        }
    return std::nullopt;
}

QParams qparams_preset(const std::string& name) {
    QParams p;
    p.name = name;
    if (name == "A2") {
        p.datum = cartan_preset("A2");
        p.q[{0, 1}] = {{1, 0, Rat(1)}, {0, 1, Rat(1)}};  // x1 + x2
        return p;
    }
    if (name == "C6") {
        // rank-2 superdatum with one odd index satisfying (C6):
        // d = (1, 2), parity = (1, 0), a = [[2,-2],[-1,2]]
        CartanSuperdatum dm;
        dm.name = "C6";
        dm.rank = 2;
        dm.a = {{2, -2}, {-1, 2}};
        dm.d = {1, 2};
        dm.parity = {1, 0};
        dm.pdim = 2;
        dm.coweights = {{1, 0}, {0, 1}};
        dm.simple_roots = {{2, -1}, {-2, 2}};
        // solve A^T G = D on the fundamental basis: G = A^{-T} D
        dm.form_gram = {{Rat(1), Rat(1)}, {Rat(1), Rat(2)}};
        dm.rho = {1, 1};
        if (auto v = validate(dm))
            throw std::logic_error("C6 preset datum invalid: " + v->axiom);
        p.datum = dm;
        p.q[{0, 1}] = {{2, 0, Rat(1)}, {0, 1, Rat(1)}};  // x1^2 + x2
        return p;
    }
    throw std::invalid_argument("unknown QParams preset: " + name);
}

void QHSElement::add(const PBWKey& k, const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(k);
    if (it == terms.end()) {
        terms.emplace(k, c);
    } else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

QHSElement QHSElement::operator+(const QHSElement& o) const {
    QHSElement r = *this;
    for (const auto& [k, c] : o.terms) r.add(k, c);
    return r;
}

QHSElement QHSElement::operator-(const QHSElement& o) const {
    QHSElement r = *this;
    for (const auto& [k, c] : o.terms) r.add(k, -c);
    return r;
}

QHSElement QHSElement::scaled(const Rat& c) const {
    QHSElement r;
    r.n = n;
    if (c == 0) return r;
    for (const auto& [k, x] : terms) r.terms.emplace(k, x * c);
    return r;
}

QHSContext::QHSContext(QParams params, size_t n) : params_(std::move(params)), n_(n) {
    if (auto v = validate(params_))
        throw std::domain_error("QHSContext: invalid parameters: " + v->axiom);
    // lexicographically least reduced words by BFS over left descents
    std::deque<Perm> queue;
    Perm id = perm_identity(n_);
    chosen_[id] = {};
    queue.push_back(id);
    // enumerate the whole group by length layers
    std::vector<Perm> all = {id};
    {
        std::set<Perm> seen = {id};
        size_t head = 0;
        while (head < all.size()) {
            Perm w = all[head++];
            for (uint8_t a = 0; a + 1 < n_; ++a) {
                Perm s = perm_identity(n_);
                std::swap(s[a], s[a + 1]);
                Perm ws = perm_compose(s, w);  // s_a o w
                if (seen.insert(ws).second) all.push_back(ws);
            }
        }
    }
    std::sort(all.begin(), all.end(), [](const Perm& x, const Perm& y) {
        size_t lx = perm_length(x), ly = perm_length(y);
        if (lx != ly) return lx < ly;
        return x < y;
    });
    for (const Perm& w : all) {
        if (perm_length(w) == 0) continue;
        // minimal left descent: w^{-1}(a) > w^{-1}(a+1)
        Perm winv(n_);
        for (size_t k = 0; k < n_; ++k) winv[w[k]] = static_cast<uint8_t>(k);
        for (uint8_t a = 0; a + 1 < n_; ++a) {
            if (winv[a] > winv[a + 1]) {
                Perm s = perm_identity(n_);
                std::swap(s[a], s[a + 1]);
                Perm rest = perm_compose(s, w);  // s_a w, one shorter
                std::vector<uint8_t> word = {a};
                const auto& tail = chosen_.at(rest);
                word.insert(word.end(), tail.begin(), tail.end());
                chosen_[w] = std::move(word);
                break;
            }
        }
    }
}

const std::vector<uint8_t>& QHSContext::chosen_word(const Perm& w) const {
    return chosen_.at(w);
}

namespace {

// single move on a reduced word: adjacent commutation or braid
struct Move {
    size_t pos;
    bool braid;
};

std::vector<std::pair<Move, std::vector<uint8_t>>> word_neighbors(
    const std::vector<uint8_t>& u) {
    std::vector<std::pair<Move, std::vector<uint8_t>>> out;
    for (size_t t = 0; t + 1 < u.size(); ++t) {
        int d = static_cast<int>(u[t]) - static_cast<int>(u[t + 1]);
        if (d >= 2 || d <= -2) {
            auto v = u;
            std::swap(v[t], v[t + 1]);
            out.push_back({{t, false}, std::move(v)});
        }
    }
    for (size_t t = 0; t + 2 < u.size(); ++t) {
        int d = static_cast<int>(u[t]) - static_cast<int>(u[t + 1]);
        if (u[t] == u[t + 2] && (d == 1 || d == -1)) {
            auto v = u;
            std::swap(v[t], v[t + 1]);
            v[t + 2] = u[t + 1];
            out.push_back({{t, true}, std::move(v)});
        }
    }
    return out;
}

// BFS path of moves from `from` to the first word satisfying `pred`
template <class Pred>
std::vector<Move> word_path(const std::vector<uint8_t>& from, Pred pred) {
    if (pred(from)) return {};
    std::map<std::vector<uint8_t>, std::pair<std::vector<uint8_t>, Move>> parent;
    std::deque<std::vector<uint8_t>> queue = {from};
    parent[from] = {from, Move{0, false}};
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (auto& [mv, nxt] : word_neighbors(cur)) {
            if (parent.count(nxt)) continue;
            parent[nxt] = {cur, mv};
            if (pred(nxt)) {
                std::vector<Move> path;
                std::vector<uint8_t> node = nxt;
                while (!(node == from)) {
                    auto& [par, m] = parent.at(node);
                    path.push_back(m);
                    node = par;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(nxt);
        }
    }
    throw std::logic_error("word_path: target unreachable in the reduced-word graph");
}

}  // namespace

std::vector<std::vector<uint8_t>> QHSContext::all_reduced_words(const Perm& w) const {
    std::vector<std::vector<uint8_t>> out;
    std::set<std::vector<uint8_t>> seen;
    std::deque<std::vector<uint8_t>> queue = {chosen_.at(w)};
    seen.insert(queue.front());
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        out.push_back(cur);
        for (auto& [mv, nxt] : word_neighbors(cur))
            if (seen.insert(nxt).second) queue.push_back(nxt);
    }
    return out;
}

std::vector<Residues> QHSContext::colors_along(const std::vector<uint8_t>& word,
                                               const Residues& nu) const {
    std::vector<Residues> colors(word.size() + 1);
    colors[word.size()] = nu;
    for (size_t t = word.size(); t-- > 0;) {
        colors[t] = colors[t + 1];
        std::swap(colors[t][word[t]], colors[t][word[t] + 1]);
    }
    return colors;
}

std::vector<std::tuple<Rat, int, int, int>> QHSContext::braid_deviation(
    size_t a, const Residues& mu) const {
    std::vector<std::tuple<Rat, int, int, int>> out;
    if (mu[a] != mu[a + 2]) return out;
    const size_t i = mu[a], j = mu[a + 1];
    auto poly = params_.q_poly(i, j);
    const bool odd = datum().parity[i] == 1;
    for (const auto& [r, s, c] : poly) {
        if (c == 0 || r == 0) continue;
        if (!odd) {
            // (x3^r - x1^r)/(x3 - x1) * x2^s
            for (int t = 0; t < r; ++t) out.emplace_back(c, t, s, r - 1 - t);
        } else {
            if (r % 2 != 0)
                throw std::domain_error(
                    "braid deviation: odd x1-power with an odd index (inadmissible Q)");
            // (x3 - x1)(x3^r - x1^r)/(x3^2 - x1^2) * x2^s, sign (-1)^{p(mu_{a+1})}
            Rat cc = datum().parity[j] == 1 ? -c : c;
            for (int t = 0; t < r / 2; ++t) {
                // (x3 - x1) x3^{r-2-2t} x1^{2t} x2^s
                out.emplace_back(cc, 2 * t, s, r - 1 - 2 * t);
                out.emplace_back(-cc, 2 * t + 1, s, r - 2 - 2 * t);
            }
        }
    }
    // canonicalize each monomial x1^e1 x2^e2 x3^e3 from the generated order
    // x3^g x1^e x2^s: moving x3^g to the right past x1^e x2^s
    std::vector<std::tuple<Rat, int, int, int>> canon;
    for (auto& [c, e1, e2, e3] : out) {
        long long swaps = static_cast<long long>(e3) *
                          (static_cast<long long>(e1) * datum().parity[mu[a + 2]] * datum().parity[mu[a]] +
                           static_cast<long long>(e2) * datum().parity[mu[a + 2]] * datum().parity[mu[a + 1]]);
        canon.emplace_back(swaps % 2 != 0 ? -c : c, e1, e2, e3);
    }
    return canon;
}

void QHSContext::push_xs(Loose t, size_t pos, std::vector<uint8_t> pending,
                         std::vector<Loose>& out) const {
    struct Item {
        Loose t;
        size_t pos;
        std::vector<uint8_t> pending;
    };
    std::vector<Item> stack;
    stack.push_back({std::move(t), pos, std::move(pending)});
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        if (it.pending.empty()) {
            out.push_back(std::move(it.t));
            continue;
        }
        uint8_t v = it.pending.front();
        it.pending.erase(it.pending.begin());
        auto colors = colors_along(it.t.word, it.t.nu);
        Rat sign = 1;
        size_t vcur = v;
        for (size_t step = it.pos; step-- > 0;) {
            const uint8_t aa = it.t.word[step];
            const Residues& mu = colors[step + 1];
            const int pbar = datum().parity[mu[aa]] * datum().parity[mu[aa + 1]];
            if (vcur != aa && vcur != aa + 1u) {
                int s = datum().parity[mu[vcur]] * pbar;
                if (s) sign = -sign;
                continue;
            }
            const bool same = mu[aa] == mu[aa + 1];
            if (vcur == aa + 1u) {
                // tau_a x_{a+1} = (-1)^pbar x_a tau_a + delta
                if (same) {
                    Loose d = it.t;
                    d.coeff = it.t.coeff * sign;
                    d.word.erase(d.word.begin() + static_cast<long>(step));
                    stack.push_back({std::move(d), it.pos - 1, it.pending});
                }
                vcur = aa;
                if (pbar) sign = -sign;
            } else {
                // tau_a x_a = (-1)^pbar x_{a+1} tau_a - (-1)^pbar delta
                if (same) {
                    Loose d = it.t;
                    d.coeff = it.t.coeff * (pbar ? sign : -sign);
                    d.word.erase(d.word.begin() + static_cast<long>(step));
                    stack.push_back({std::move(d), it.pos - 1, it.pending});
                }
                vcur = aa + 1u;
                if (pbar) sign = -sign;
            }
        }
        // merge into the canonical x-block: the variable arrives at the
        // block's right end and commutes left past larger indices
        const Residues& lam = colors[0];
        if (datum().parity[lam[vcur]]) {
            long long cnt = 0;
            for (size_t j = vcur + 1; j < n_; ++j)
                cnt += static_cast<long long>(it.t.xleft[j]) * datum().parity[lam[j]];
            if (cnt % 2 != 0) sign = -sign;
        }
        it.t.coeff *= sign;
        it.t.xleft[vcur] += 1;
        stack.push_back({std::move(it.t), it.pos, std::move(it.pending)});
    }
}

void QHSContext::to_canonical(Loose start, QHSElement& out) const {
    out.n = n_;
    std::vector<Loose> stack;
    stack.push_back(std::move(start));
    while (!stack.empty()) {
        Loose t = std::move(stack.back());
        stack.pop_back();
        if (t.coeff == 0) continue;

        // scan prefixes for the first length drop
        Perm p = perm_identity(n_);
        size_t fail = t.word.size();
        for (size_t k = 0; k < t.word.size(); ++k) {
            uint8_t b = t.word[k];
            if (p[b] > p[b + 1]) {  // right descent: length would drop
                fail = k;
                break;
            }
            Perm s = perm_identity(n_);
            std::swap(s[b], s[b + 1]);
            p = perm_compose(p, s);
        }

        if (fail == t.word.size()) {
            const auto& target = chosen_.at(p);
            if (t.word == target) {
                out.add(PBWKey{t.nu, t.xleft, p}, t.coeff);
                continue;
            }
            auto path = word_path(t.word, [&](const std::vector<uint8_t>& u) {
                return u == target;
            });
            // apply the moves; braid moves emit deviation side terms
            for (const Move& mv : path) {
                auto colors = colors_along(t.word, t.nu);
                if (!mv.braid) {
                    const uint8_t q1 = t.word[mv.pos], q2 = t.word[mv.pos + 1];
                    const Residues& mu = colors[mv.pos + 2];
                    int s = datum().parity[mu[q1]] * datum().parity[mu[q1 + 1]] *
                            datum().parity[mu[q2]] * datum().parity[mu[q2 + 1]];
                    if (s) t.coeff = -t.coeff;
                    std::swap(t.word[mv.pos], t.word[mv.pos + 1]);
                } else {
                    const uint8_t x = t.word[mv.pos], y = t.word[mv.pos + 1];
                    const size_t a = std::min(x, y);
                    const Residues& mu = colors[mv.pos + 3];
                    // [a,a+1,a] -> [a+1,a,a+1] adds -D; the reverse adds +D
                    Rat side = (x < y) ? Rat(-1) : Rat(1);
                    for (const auto& [c, e1, e2, e3] : braid_deviation(a, mu)) {
                        Loose d;
                        d.coeff = t.coeff * side * c;
                        d.xleft = t.xleft;
                        d.nu = t.nu;
                        d.word.assign(t.word.begin(), t.word.begin() + static_cast<long>(mv.pos));
                        d.word.insert(d.word.end(), t.word.begin() + static_cast<long>(mv.pos) + 3,
                                      t.word.end());
                        std::vector<uint8_t> pending;
                        for (int r = 0; r < e1; ++r) pending.push_back(static_cast<uint8_t>(a));
                        for (int r = 0; r < e2; ++r) pending.push_back(static_cast<uint8_t>(a + 1));
                        for (int r = 0; r < e3; ++r) pending.push_back(static_cast<uint8_t>(a + 2));
                        push_xs(std::move(d), mv.pos, std::move(pending), stack);
                    }
                    std::swap(t.word[mv.pos], t.word[mv.pos + 1]);
                    t.word[mv.pos + 2] = y;
                }
            }
            stack.push_back(std::move(t));
            continue;
        }

        // prefix word[0..fail-1] is reduced, letter b = word[fail] drops it
        const uint8_t b = t.word[fail];
        std::vector<uint8_t> prefix(t.word.begin(), t.word.begin() + static_cast<long>(fail));
        std::vector<uint8_t> rest(t.word.begin() + static_cast<long>(fail) + 1, t.word.end());
        auto path = word_path(prefix, [&](const std::vector<uint8_t>& u) {
            return !u.empty() && u.back() == b;
        });
        for (const Move& mv : path) {
            // colors along the FULL current word (prefix + [b] + rest)
            std::vector<uint8_t> full = prefix;
            full.push_back(b);
            full.insert(full.end(), rest.begin(), rest.end());
            auto colors = colors_along(full, t.nu);
            if (!mv.braid) {
                const uint8_t q1 = prefix[mv.pos], q2 = prefix[mv.pos + 1];
                const Residues& mu = colors[mv.pos + 2];
                int s = datum().parity[mu[q1]] * datum().parity[mu[q1 + 1]] *
                        datum().parity[mu[q2]] * datum().parity[mu[q2 + 1]];
                if (s) t.coeff = -t.coeff;
                std::swap(prefix[mv.pos], prefix[mv.pos + 1]);
            } else {
                const uint8_t x = prefix[mv.pos], y = prefix[mv.pos + 1];
                const size_t a = std::min(x, y);
                const Residues& mu = colors[mv.pos + 3];
                Rat side = (x < y) ? Rat(-1) : Rat(1);
                for (const auto& [c, e1, e2, e3] : braid_deviation(a, mu)) {
                    Loose d;
                    d.coeff = t.coeff * side * c;
                    d.xleft = t.xleft;
                    d.nu = t.nu;
                    d.word.assign(prefix.begin(), prefix.begin() + static_cast<long>(mv.pos));
                    d.word.insert(d.word.end(), prefix.begin() + static_cast<long>(mv.pos) + 3,
                                  prefix.end());
                    d.word.push_back(b);
                    d.word.insert(d.word.end(), rest.begin(), rest.end());
                    std::vector<uint8_t> pending;
                    for (int r = 0; r < e1; ++r) pending.push_back(static_cast<uint8_t>(a));
                    for (int r = 0; r < e2; ++r) pending.push_back(static_cast<uint8_t>(a + 1));
                    for (int r = 0; r < e3; ++r) pending.push_back(static_cast<uint8_t>(a + 2));
                    push_xs(std::move(d), mv.pos, std::move(pending), stack);
                }
                std::swap(prefix[mv.pos], prefix[mv.pos + 1]);
                prefix[mv.pos + 2] = y;
            }
        }
        // prefix now ends with b: tau_b tau_b -> Q(x_b, x_{b+1})
        std::vector<uint8_t> base(prefix.begin(), prefix.end() - 1);
        std::vector<uint8_t> word2 = base;
        word2.insert(word2.end(), rest.begin(), rest.end());
        // colors right of the pair: along (base + [b,b] + rest) at entry
        std::vector<uint8_t> full = prefix;
        full.push_back(b);
        full.insert(full.end(), rest.begin(), rest.end());
        auto colors = colors_along(full, t.nu);
        const Residues& mu = colors[prefix.size() + 1];
        if (mu[b] == mu[b + 1]) continue;  // Q_{ii} = 0
        for (const auto& [r, s, c] : params_.q_poly(mu[b], mu[b + 1])) {
            if (c == 0) continue;
            Loose d;
            d.coeff = t.coeff * c;
            d.xleft = t.xleft;
            d.nu = t.nu;
            d.word = word2;
            std::vector<uint8_t> pending;
            for (int k = 0; k < r; ++k) pending.push_back(b);
            for (int k = 0; k < s; ++k) pending.push_back(static_cast<uint8_t>(b + 1));
            push_xs(std::move(d), base.size(), std::move(pending), stack);
        }
    }
}

QHSElement QHSContext::one() const {
    QHSElement e = zero();
    Residues nu(n_, 0);
    std::function<void(size_t)> gen = [&](size_t pos) {
        if (pos == n_) {
            e.terms.emplace(PBWKey{nu, std::vector<int>(n_, 0), perm_identity(n_)}, Rat(1));
            return;
        }
        for (uint8_t i = 0; i < datum().rank; ++i) {
            nu[pos] = i;
            gen(pos + 1);
        }
    };
    gen(0);
    return e;
}

QHSElement QHSContext::gen_e(const Residues& nu) const {
    QHSElement e = zero();
    e.terms.emplace(PBWKey{nu, std::vector<int>(n_, 0), perm_identity(n_)}, Rat(1));
    return e;
}

QHSElement QHSContext::gen_x(size_t k) const {
    QHSElement e = zero();
    Residues nu(n_, 0);
    std::function<void(size_t)> gen = [&](size_t pos) {
        if (pos == n_) {
            std::vector<int> a(n_, 0);
            a[k] = 1;
            e.terms.emplace(PBWKey{nu, a, perm_identity(n_)}, Rat(1));
            return;
        }
        for (uint8_t i = 0; i < datum().rank; ++i) {
            nu[pos] = i;
            gen(pos + 1);
        }
    };
    gen(0);
    return e;
}

QHSElement QHSContext::gen_tau(size_t a) const {
    QHSElement e = zero();
    Perm s = perm_identity(n_);
    std::swap(s[a], s[a + 1]);
    Residues nu(n_, 0);
    std::function<void(size_t)> gen = [&](size_t pos) {
        if (pos == n_) {
            e.terms.emplace(PBWKey{nu, std::vector<int>(n_, 0), s}, Rat(1));
            return;
        }
        for (uint8_t i = 0; i < datum().rank; ++i) {
            nu[pos] = i;
            gen(pos + 1);
        }
    };
    gen(0);
    return e;
}

QHSElement QHSContext::multiply(const QHSElement& u, const QHSElement& v) {
    QHSElement out = zero();
    for (const auto& [ku, cu] : u.terms) {
        const auto& wu = chosen_.at(ku.w);
        for (const auto& [kv, cv] : v.terms) {
            // left colors of the v-monomial must match u's right idempotent
            Residues left(n_);
            Perm winv(n_);
            for (size_t k = 0; k < n_; ++k) winv[kv.w[k]] = static_cast<uint8_t>(k);
            for (size_t k = 0; k < n_; ++k) left[k] = kv.nu[winv[k]];
            if (left != ku.nu) continue;

            Loose t;
            t.coeff = cu * cv;
            t.xleft = ku.a;
            t.word = wu;
            t.nu = ku.nu;
            // push v's x-block through u's tau-word
            std::vector<uint8_t> pending;
            for (size_t k = 0; k < n_; ++k)
                for (int r = 0; r < kv.a[k]; ++r) pending.push_back(static_cast<uint8_t>(k));
            std::vector<Loose> pushed;
            push_xs(std::move(t), wu.size(), std::move(pending), pushed);
            const auto& wv = chosen_.at(kv.w);
            for (Loose& l : pushed) {
                l.word.insert(l.word.end(), wv.begin(), wv.end());
                l.nu = kv.nu;
                to_canonical(std::move(l), out);
            }
        }
    }
    return out;
}

long long QHSContext::term_degree(const PBWKey& k) const {
    const auto& word = chosen_.at(k.w);
    auto colors = colors_along(word, k.nu);
    long long deg = 0;
    for (size_t t = 0; t < word.size(); ++t) {
        const Residues& mu = colors[t + 1];
        deg -= datum().d[mu[word[t]]] * datum().a[mu[word[t]]][mu[word[t] + 1]];
    }
    const Residues& lam = colors[0];
    for (size_t j = 0; j < n_; ++j) deg += 2 * k.a[j] * datum().d[lam[j]];
    return deg;
}

int QHSContext::term_parity(const PBWKey& k) const {
    const auto& word = chosen_.at(k.w);
    auto colors = colors_along(word, k.nu);
    long long par = 0;
    for (size_t t = 0; t < word.size(); ++t) {
        const Residues& mu = colors[t + 1];
        par += datum().parity[mu[word[t]]] * datum().parity[mu[word[t] + 1]];
    }
    const Residues& lam = colors[0];
    for (size_t j = 0; j < n_; ++j) par += k.a[j] * datum().parity[lam[j]];
    return static_cast<int>(par % 2);
}

std::optional<long long> QHSContext::degree(const QHSElement& u) const {
    std::optional<long long> deg;
    for (const auto& [k, c] : u.terms) {
        long long d = term_degree(k);
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg;
}

std::optional<int> QHSContext::parity(const QHSElement& u) const {
    std::optional<int> par;
    for (const auto& [k, c] : u.terms) {
        int p = term_parity(k);
        if (par && *par != p) return std::nullopt;
        par = p;
    }
    return par;
}

QHSElement QHSContext::b_word(const std::vector<uint8_t>& word, uint8_t i) {
    Residues nu(n_, i);
    QHSElement acc = gen_e(nu);
    for (uint8_t k : word) {
        QHSElement bk = multiply(multiply(gen_tau(k), gen_x(k + 1)), gen_e(nu));
        acc = multiply(acc, bk);
    }
    return acc;
}

QHSElement QHSContext::b_longest(uint8_t i) {
    Perm w0(n_);
    for (size_t k = 0; k < n_; ++k) w0[k] = static_cast<uint8_t>(n_ - 1 - k);
    return b_word(chosen_.at(w0), i);
}

bool QHSContext::relations_close() {
    const size_t rank = datum().rank;
    std::vector<Residues> all_nu;
    {
        Residues nu(n_, 0);
        std::function<void(size_t)> gen = [&](size_t pos) {
            if (pos == n_) {
                all_nu.push_back(nu);
                return;
            }
            for (uint8_t i = 0; i < rank; ++i) {
                nu[pos] = i;
                gen(pos + 1);
            }
        };
        gen(0);
    }
    auto m = [&](const QHSElement& a, const QHSElement& b) { return multiply(a, b); };

    for (const Residues& nu : all_nu) {
        QHSElement env = gen_e(nu);
        // idempotents
        for (const Residues& mu : all_nu) {
            QHSElement prod = m(gen_e(mu), env);
            if (mu == nu) {
                if (!(prod == env)) return false;
            } else if (!prod.is_zero()) {
                return false;
            }
        }
        // x_p x_q super-commutation
        for (size_t pp = 0; pp < n_; ++pp)
            for (size_t qq = pp + 1; qq < n_; ++qq) {
                Rat sgn = (datum().parity[nu[pp]] * datum().parity[nu[qq]]) ? -1 : 1;
                QHSElement lhs = m(m(gen_x(pp), gen_x(qq)), env);
                QHSElement rhs = m(m(gen_x(qq), gen_x(pp)), env).scaled(sgn);
                if (!(lhs == rhs)) return false;
            }
        for (size_t aa = 0; aa + 1 < n_; ++aa) {
            Residues snu = nu;
            std::swap(snu[aa], snu[aa + 1]);
            // tau_a e(nu) = e(s_a nu) tau_a
            if (!(m(gen_tau(aa), env) == m(gen_e(snu), gen_tau(aa)))) return false;
            // tau_a x_p = +- x_p tau_a for distant p
            for (size_t pp = 0; pp < n_; ++pp) {
                if (pp == aa || pp == aa + 1) continue;
                Rat sgn = (datum().parity[nu[pp]] * datum().parity[nu[aa]] *
                           datum().parity[nu[aa + 1]])
                              ? -1
                              : 1;
                QHSElement lhs = m(m(gen_tau(aa), gen_x(pp)), env);
                QHSElement rhs = m(m(gen_x(pp), gen_tau(aa)), env).scaled(sgn);
                if (!(lhs == rhs)) return false;
            }
            // the mixed relations with delta
            Rat sgn = (datum().parity[nu[aa]] * datum().parity[nu[aa + 1]]) ? -1 : 1;
            QHSElement del = (nu[aa] == nu[aa + 1]) ? env : zero();
            QHSElement l1 = m(m(gen_tau(aa), gen_x(aa + 1)), env) -
                            m(m(gen_x(aa), gen_tau(aa)), env).scaled(sgn);
            if (!(l1 == del)) return false;
            QHSElement l2 = m(m(gen_x(aa + 1), gen_tau(aa)), env) -
                            m(m(gen_tau(aa), gen_x(aa)), env).scaled(sgn);
            if (!(l2 == del)) return false;
            // tau_a^2 = Q(x_a, x_{a+1})
            QHSElement lhs = m(m(gen_tau(aa), gen_tau(aa)), env);
            QHSElement rhs = zero();
            for (const auto& [r, s, c] : params_.q_poly(nu[aa], nu[aa + 1])) {
                QHSElement mono = env;
                for (int k = 0; k < r; ++k) mono = m(gen_x(aa), mono);
                for (int k = 0; k < s; ++k) mono = m(gen_x(aa + 1), mono);
                rhs = rhs + mono.scaled(c);
            }
            if (!(lhs == rhs)) return false;
            // distant tau commutation
            for (size_t bb = aa + 2; bb + 1 < n_; ++bb) {
                Rat sg = (datum().parity[nu[aa]] * datum().parity[nu[aa + 1]] *
                          datum().parity[nu[bb]] * datum().parity[nu[bb + 1]])
                             ? -1
                             : 1;
                QHSElement lhs2 = m(m(gen_tau(aa), gen_tau(bb)), env);
                QHSElement rhs2 = m(m(gen_tau(bb), gen_tau(aa)), env).scaled(sg);
                if (!(lhs2 == rhs2)) return false;
            }
        }
        // braid deviation
        for (size_t aa = 0; aa + 2 < n_; ++aa) {
            QHSElement lhs = m(m(m(gen_tau(aa + 1), gen_tau(aa)), gen_tau(aa + 1)), env) -
                             m(m(m(gen_tau(aa), gen_tau(aa + 1)), gen_tau(aa)), env);
            QHSElement rhs = zero();
            if (nu[aa] == nu[aa + 2]) {
                for (const auto& [c, e1, e2, e3] : braid_deviation(aa, nu)) {
                    QHSElement mono = env;
                    for (int k = 0; k < e1; ++k) mono = m(gen_x(aa), mono);
                    for (int k = 0; k < e2; ++k) mono = m(gen_x(aa + 1), mono);
                    for (int k = 0; k < e3; ++k) mono = m(gen_x(aa + 2), mono);
                    rhs = rhs + mono.scaled(c);
                }
            }
            if (!(lhs == rhs)) return false;
        }
    }
    return true;
}

bool QHSContext::associativity_fuzz(unsigned rounds, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<size_t> xk(0, n_ - 1);
    std::uniform_int_distribution<size_t> ta(0, n_ - 2);
    std::uniform_int_distribution<int> len(1, 3);
    std::uniform_int_distribution<uint8_t> res(0, static_cast<uint8_t>(datum().rank - 1));
    auto rand_elt = [&]() {
        QHSElement e = one();
        int l = len(rng);
        for (int t = 0; t < l; ++t) {
            switch (n_ >= 2 ? kind(rng) : (kind(rng) == 1 ? 0 : kind(rng))) {
                case 0: e = multiply(e, gen_x(xk(rng))); break;
                case 1: e = multiply(e, gen_tau(ta(rng))); break;
                default: {
                    Residues nu(n_);
                    for (auto& x : nu) x = res(rng);
                    e = multiply(e, gen_e(nu));
                }
            }
        }
        return e;
    };
    for (unsigned round = 0; round < rounds; ++round) {
        QHSElement u = rand_elt(), v = rand_elt(), w = rand_elt();
        if (!(multiply(multiply(u, v), w) == multiply(u, multiply(v, w)))) return false;
    }
    return true;
}

LaurentPi graded_dim(QHSContext& ctx, const ZVec& beta, int lo, int hi) {
    const auto& dm = ctx.datum();
    const size_t n = ctx.strands();
    LaurentPi total;
    // enumerate I^beta
    std::vector<Residues> seqs;
    Residues nu(n, 0);
    ZVec left = beta;
    std::function<void(size_t)> gen = [&](size_t pos) {
        if (pos == n) {
            seqs.push_back(nu);
            return;
        }
        for (uint8_t i = 0; i < dm.rank; ++i) {
            if (left[i] == 0) continue;
            left[i] -= 1;
            nu[pos] = i;
            gen(pos + 1);
            left[i] += 1;
        }
    };
    gen(0);
    // enumerate S_n via the chosen-word table keys
    std::vector<Perm> perms;
    {
        Perm id = perm_identity(n);
        std::set<Perm> seen = {id};
        std::deque<Perm> queue = {id};
        while (!queue.empty()) {
            Perm w = queue.front();
            queue.pop_front();
            perms.push_back(w);
            for (uint8_t a = 0; a + 1 < n; ++a) {
                Perm s = perm_identity(n);
                std::swap(s[a], s[a + 1]);
                Perm ws = perm_compose(s, w);
                if (seen.insert(ws).second) queue.push_back(ws);
            }
        }
    }
    for (const Residues& sq : seqs)
        for (const Perm& w : perms) {
            PBWKey key{sq, std::vector<int>(n, 0), w};
            long long base = ctx.term_degree(key);
            int par = ctx.term_parity(key);
            LaurentPi poly = LaurentPi::monomial(static_cast<int>(base),
                                                 PiScalar::pi_pow(par));
            // left colors for the x-variables
            std::vector<uint8_t> word = ctx.chosen_word(w);
            Residues lam = sq;
            {
                Perm winv(n);
                for (size_t k = 0; k < n; ++k) winv[w[k]] = static_cast<uint8_t>(k);
                for (size_t k = 0; k < n; ++k) lam[k] = sq[winv[k]];
            }
            for (size_t k = 0; k < n; ++k) {
                int step = static_cast<int>(2 * dm.d[lam[k]]);
                int ppar = dm.parity[lam[k]];
                LaurentPi acc;
                for (int j = 0;; ++j) {
                    int shift = j * step;
                    if (poly.min_exp() + shift > hi) break;
                    LaurentPi contrib =
                        poly.shifted(shift)
                            .scaled(PiScalar::pi_pow(static_cast<long long>(j) * ppar));
                    acc += contrib;
                }
                // truncate outside the window
                LaurentPi trunc;
                for (const auto& [e, c] : acc.terms())
                    if (e >= lo && e <= hi) trunc.add_term(e, c);
                poly = trunc;
            }
            total += poly;
        }
    LaurentPi trunc;
    for (const auto& [e, c] : total.terms())
        if (e >= lo && e <= hi) trunc.add_term(e, c);
    return trunc;
}

QhsCharacter character_L_in(QHSContext& ctx, uint8_t i, size_t n) {
    QhsCharacter ch;
    Residues nu(n, i);
    LaurentPi val;
    // sum over S_n of the tau-word degrees on e(i^n)
    std::set<Perm> seen;
    std::deque<Perm> queue = {perm_identity(n)};
    seen.insert(queue.front());
    while (!queue.empty()) {
        Perm w = queue.front();
        queue.pop_front();
        PBWKey key{nu, std::vector<int>(n, 0), w};
        val += LaurentPi::monomial(static_cast<int>(ctx.term_degree(key)),
                                   PiScalar::pi_pow(ctx.term_parity(key)));
        for (uint8_t a = 0; a + 1 < n; ++a) {
            Perm s = perm_identity(n);
            std::swap(s[a], s[a + 1]);
            Perm ws = perm_compose(s, w);
            if (seen.insert(ws).second) queue.push_back(ws);
        }
    }
    ch[nu] = val;
    return ch;
}

QhsCharacter char_delta(const QhsCharacter& ch, uint8_t i, size_t k) {
    QhsCharacter out;
    for (const auto& [nu, v] : ch) {
        if (nu.size() < k) continue;
        bool tail = true;
        for (size_t t = 0; t < k; ++t) tail = tail && nu[nu.size() - 1 - t] == i;
        if (tail) out.emplace(nu, v);
    }
    return out;
}

size_t char_epsilon(const QhsCharacter& ch, uint8_t i) {
    size_t n = 0;
    for (const auto& [nu, v] : ch) n = std::max(n, nu.size());
    for (size_t k = n; k > 0; --k) {
        auto d = char_delta(ch, i, k);
        for (const auto& [nu, v] : d)
            if (!v.is_zero()) return k;
    }
    return 0;
}

CycloPoly cyclotomic_poly(const CartanSuperdatum& dm, const ZVec& lambda, size_t i,
                          const std::vector<Rat>& c) {
    long long deg = dm.pairing(i, lambda);
    if (deg < 0) throw std::domain_error("cyclotomic_poly: lambda not dominant at i");
    if (c.size() != static_cast<size_t>(deg) + 1)
        throw std::domain_error("cyclotomic_poly: need <h_i,Lambda>+1 coefficients");
    if (c[0] != 1) throw std::domain_error("cyclotomic_poly: c_{i;0} must be 1 (monic)");
    for (size_t k = 0; k < c.size(); ++k)
        if (dm.parity[i] == 1 && k % 2 == 1 && c[k] != 0)
            throw std::domain_error("cyclotomic_poly: c_{i;k} must vanish for odd k, odd i");
    return CycloPoly{static_cast<size_t>(deg), c};
}

bool cyclotomic_degree_check(const CartanSuperdatum& dm, const ZVec& lambda, size_t i,
                             const std::vector<Rat>& c) {
    try {
        auto p = cyclotomic_poly(dm, lambda, i, c);
        return p.degree == static_cast<size_t>(dm.pairing(i, lambda));
    } catch (const std::domain_error&) {
        return false;
    }
}

QHSElement parse_qhs_expression(QHSContext& ctx, const std::string& expr) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : expr) {
        if (ch == '*' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) tokens.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    QHSElement acc = ctx.one();
    for (const std::string& tok : tokens) {
        if (tok.size() >= 3 && tok[0] == 'e' && tok[1] == '(') {
            Residues nu;
            std::string inner = tok.substr(2, tok.size() - 3);
            std::stringstream ss(inner);
            std::string part;
            while (std::getline(ss, part, ','))
                nu.push_back(static_cast<uint8_t>(std::stoul(part) - 1));
            if (nu.size() != ctx.strands())
                throw std::invalid_argument("e(...) arity must match n");
            acc = ctx.multiply(acc, ctx.gen_e(nu));
        } else if (tok[0] == 'x') {
            size_t k = std::stoul(tok.substr(1));
            if (k < 1 || k > ctx.strands()) throw std::invalid_argument("x index range");
            acc = ctx.multiply(acc, ctx.gen_x(k - 1));
        } else if (tok[0] == 't') {
            size_t a = std::stoul(tok.substr(1));
            if (a < 1 || a + 1 > ctx.strands()) throw std::invalid_argument("t index range");
            acc = ctx.multiply(acc, ctx.gen_tau(a - 1));
        } else {
            throw std::invalid_argument("unknown token: " + tok);
        }
    }
    return acc;
}

Json qhs_element_to_json(const QHSContext& ctx, const QHSElement& u) {
    Json arr = Json::array();
    for (const auto& [k, c] : u.terms) {
        Json t;
        Json nu = Json::array();
        for (uint8_t x : k.nu) nu.push_back(x + 1);
        t["nu"] = nu;
        t["a"] = k.a;
        Json w = Json::array();
        for (uint8_t x : ctx.chosen_word(k.w)) w.push_back(x + 1);
        t["w"] = w;
        t["coeff"] = rat_to_json(c);
        arr.push_back(t);
    }
    return arr;
}

}  // namespace qkms
