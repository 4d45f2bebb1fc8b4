#include "qkms/linalg.hpp"

namespace qkms {

size_t bareiss_rank(Mat<Laurent> m) {
    const size_t rows = m.rows(), cols = m.cols();
    Laurent prev{1};
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        // pivot with the fewest terms keeps intermediate growth down
        size_t piv = rows;
        size_t best = SIZE_MAX;
        for (size_t i = rank; i < rows; ++i) {
            if (m(i, col).is_zero()) continue;
            size_t sz = m(i, col).terms().size();
            if (sz < best) { best = sz; piv = i; }
        }
        if (piv == rows) continue;
        if (piv != rank)
            for (size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(rank, j));
        const Laurent pivot = m(rank, col);
        for (size_t i = rank + 1; i < rows; ++i) {
            const bool has_head = !m(i, col).is_zero();
            for (size_t j = col + 1; j < cols; ++j) {
                Laurent t = pivot * m(i, j);
                if (has_head) t -= m(i, col) * m(rank, j);
                auto d = try_div_exact(t, prev);
                if (!d) throw std::logic_error("bareiss: inexact division");
                m(i, j) = *d;
            }
            m(i, col) = Laurent{};
        }
        prev = pivot;
        ++rank;
    }
    return rank;
}

size_t rank_at_pi(const Mat<LaurentPi>& m, int sign) {
    Mat<Laurent> s(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) s(i, j) = specialize_pi(m(i, j), sign);
    return bareiss_rank(std::move(s));
}

size_t eval_rank_at_pi(const Mat<LaurentPi>& m, int sign, const Rat& point) {
    if (point == 0) throw std::domain_error("eval_rank_at_pi: q must be nonzero");
    Mat<Rat> s(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            Rat v = 0;
            const Laurent l = specialize_pi(m(i, j), sign);
            for (const auto& [e, c] : l.terms()) {
                Rat p = 1;
                if (e >= 0)
                    for (int k = 0; k < e; ++k) p *= point;
                else
                    for (int k = 0; k < -e; ++k) p /= point;
                v += Rat(c) * p;
            }
            s(i, j) = v;
        }
    return gauss_rank(std::move(s));
}

}  // namespace qkms

namespace qkms {

namespace {

bool columns_independent(const Mat<LaurentPi>& m, const std::vector<size_t>& cols, int sign) {
    Mat<Laurent> s(m.rows(), cols.size());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            s(i, j) = specialize_pi(m(i, cols[j]), sign);
    return bareiss_rank(std::move(s)) == cols.size();
}

}  // namespace

std::optional<std::vector<size_t>> select_pivot_columns(const Mat<LaurentPi>& m,
                                                        size_t target_rank) {
    std::vector<size_t> sel;
    for (size_t c = 0; c < m.cols() && sel.size() < target_rank; ++c) {
        sel.push_back(c);
        if (!columns_independent(m, sel, +1) || !columns_independent(m, sel, -1))
            sel.pop_back();
    }
    if (sel.size() == target_rank) return sel;
    // exhaustive fallback for unlucky greedy orders
    std::vector<size_t> pick;
    std::function<bool(size_t)> dfs = [&](size_t from) {
        if (pick.size() == target_rank) return true;
        for (size_t c = from; c < m.cols(); ++c) {
            pick.push_back(c);
            if (columns_independent(m, pick, +1) && columns_independent(m, pick, -1) &&
                dfs(c + 1))
                return true;
            pick.pop_back();
        }
        return false;
    };
    if (dfs(0)) return pick;
    return std::nullopt;
}

}  // namespace qkms
