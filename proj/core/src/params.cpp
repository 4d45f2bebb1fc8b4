#include "qkms/params.hpp"

namespace qkms {

LaurentSqrt lpow(const LaurentSqrt& x, long long k) {
    if (k >= 0) return x.pow(static_cast<unsigned>(k));
    return x.inverted_monomial().pow(static_cast<unsigned>(-k));
}

std::vector<SqrtPiScalar> default_sqrt_choice(const CartanSuperdatum& datum) {
    std::vector<SqrtPiScalar> c;
    for (size_t i = 0; i < datum.rank; ++i)
        c.push_back(datum.parity[i] ? SqrtPiScalar::sqrt_pi() : SqrtPiScalar(1));
    return c;
}

std::vector<SqrtPiScalar> pi_sqrt_choice(const CartanSuperdatum& datum) {
    std::vector<SqrtPiScalar> c;
    for (size_t i = 0; i < datum.rank; ++i)
        c.push_back(datum.parity[i] ? SqrtPiScalar::sqrt_pi_pow(3) : SqrtPiScalar::pi());
    return c;
}

namespace {

LaurentSqrt unit(const SqrtPiScalar& s, int qexp = 0) {
    return LaurentSqrt::monomial(qexp, s);
}

LaurentSqrt spow(const SqrtPiScalar& s, long long k) {
    // s is a unit of Z[sqrt(pi)]
    SqrtPiScalar r(1);
    if (k >= 0) {
        for (long long t = 0; t < k; ++t) r *= s;
    } else {
        SqrtPiScalar inv = *s.try_invert_unit();
        for (long long t = 0; t < -k; ++t) r *= inv;
    }
    return LaurentSqrt(r);
}

std::optional<Violation> check_invertible(const std::vector<std::vector<LaurentSqrt>>& m,
                                          const char* what) {
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) {
            try {
                (void)m[i][j].inverted_monomial();
            } catch (const std::domain_error&) {
                return Violation{"invertibility", std::string(what) + " entry (" +
                                                      std::to_string(i + 1) + "," +
                                                      std::to_string(j + 1) + ") is not a unit"};
            }
        }
    return std::nullopt;
}

}  // namespace

std::optional<Violation> check_pt(const ThetaP& tp, const CartanSuperdatum& dm) {
    const size_t n = dm.rank;
    if (tp.theta.size() != n || tp.p_off.size() != n || tp.p_diag.size() != n)
        return Violation{"shape", "parameter family shape mismatch"};
    if (auto v = check_invertible(tp.theta, "theta")) return v;
    if (auto v = check_invertible(tp.p_off, "p")) return v;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            LaurentSqrt lhs1 = tp.p_off[i][j].pow(2);
            LaurentSqrt rhs1 = lpow(tp.p_diag[i], 2 * dm.a[i][j]);
            if (lhs1 != rhs1)
                return Violation{"p_ij^2 = p_i^{2a_ij}",
                                 "(i,j)=(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"};
            LaurentSqrt lhs2 = tp.p_off[i][j] * tp.p_off[j][i] *
                               (tp.theta[i][j] * tp.theta[j][i]).inverted_monomial();
            if (lhs2 != rhs1)
                return Violation{"(p_ij p_ji)/(theta_ij theta_ji) = p_i^{2a_ij}",
                                 "(i,j)=(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"};
        }
    for (size_t i = 0; i < n; ++i) {
        LaurentSqrt lhs = tp.p_off[i][i] * tp.theta[i][i].inverted_monomial();
        if (lhs != tp.p_diag[i].pow(2))
            return Violation{"p_ii/theta_ii = p_i^2", "i=" + std::to_string(i + 1)};
    }
    return std::nullopt;
}

std::optional<Violation> check_ttp(const TildeThetaP& tp, const CartanSuperdatum& dm) {
    const size_t n = dm.rank;
    if (tp.ttheta.size() != n || tp.tp.size() != n)
        return Violation{"shape", "parameter family shape mismatch"};
    if (auto v = check_invertible(tp.ttheta, "ttheta")) return v;
    for (size_t i = 0; i < n; ++i) {
        if (tp.ttheta[i][i] != lpow(tp.tp[i], -1))
            return Violation{"ttheta_ii = tp_i^{-1}", "i=" + std::to_string(i + 1)};
        for (size_t j = 0; j < n; ++j)
            if (tp.ttheta[i][j] * tp.ttheta[j][i] != lpow(tp.tp[i], -dm.a[i][j]))
                return Violation{"ttheta_ij ttheta_ji = tp_i^{-a_ij}",
                                 "(i,j)=(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"};
    }
    return std::nullopt;
}

TildeThetaP derive_tilde(const ThetaP& tp) {
    TildeThetaP out;
    out.name = tp.name + "~";
    const size_t n = tp.p_diag.size();
    out.ttheta.assign(n, std::vector<LaurentSqrt>(n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j)
            out.ttheta[i][j] = tp.theta[i][j] * tp.p_off[j][i].inverted_monomial();
        out.tp.push_back(tp.p_diag[i].pow(2));
    }
    return out;
}

ThetaP lift_tilde(const TildeThetaP& tp, const CartanSuperdatum& dm,
                  const std::vector<SqrtPiScalar>& sqrt_choice) {
    const size_t n = dm.rank;
    ThetaP out;
    out.name = tp.name + "-lift";
    out.theta.assign(n, std::vector<LaurentSqrt>(n));
    out.p_off.assign(n, std::vector<LaurentSqrt>(n));
    for (size_t i = 0; i < n; ++i) {
        // p_i with p_i^2 = tp_i: presets have tp_i = q_i^2 pi_i
        LaurentSqrt pi_ = unit(sqrt_choice[i], static_cast<int>(dm.d[i]));
        if (pi_.pow(2) != tp.tp[i])
            throw std::domain_error("lift_tilde: sqrt choice does not square to tp_i");
        out.p_diag.push_back(pi_);
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            out.p_off[i][j] = lpow(out.p_diag[i], dm.a[i][j]);
            out.theta[i][j] = tp.ttheta[i][j] * lpow(out.p_diag[j], dm.a[j][i]);
        }
    return out;
}

ThetaP preset_theta_p(const std::string& name, const CartanSuperdatum& dm,
                      const std::vector<SqrtPiScalar>& sqrt_choice) {
    const size_t n = dm.rank;
    ThetaP out;
    out.name = name;
    out.theta.assign(n, std::vector<LaurentSqrt>(n));
    out.p_off.assign(n, std::vector<LaurentSqrt>(n));
    for (size_t i = 0; i < n; ++i)
        out.p_diag.push_back(unit(sqrt_choice[i], static_cast<int>(dm.d[i])));
    if (name == "BKM") {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                out.p_off[i][j] = LaurentSqrt::q_pow(static_cast<int>(dm.d[i] * dm.a[i][j]));
                if (i == j)
                    out.theta[i][j] = LaurentSqrt(SqrtPiScalar(PiScalar::pi_pow(dm.parity[i])));
                else
                    out.theta[i][j] = LaurentSqrt(1);
            }
        return out;
    }
    if (name == "boldU") {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                out.p_off[i][j] = lpow(out.p_diag[i], dm.a[i][j]);
                if (i == j)
                    out.theta[i][j] = LaurentSqrt(1);
                else
                    out.theta[i][j] = spow(sqrt_choice[j], dm.a[j][i]);
            }
        return out;
    }
    throw std::invalid_argument("unknown parameter preset: " + name);
}

TildeThetaP preset_uqsg(const CartanSuperdatum& dm) {
    const size_t n = dm.rank;
    TildeThetaP out;
    out.name = "Uqsg";
    out.ttheta.assign(n, std::vector<LaurentSqrt>(n));
    for (size_t i = 0; i < n; ++i) {
        SqrtPiScalar pi_i(PiScalar::pi_pow(dm.parity[i]));
        out.tp.push_back(LaurentSqrt::monomial(static_cast<int>(2 * dm.d[i]), pi_i));
        for (size_t j = 0; j < n; ++j) {
            SqrtPiScalar sgn(PiScalar::pi_pow(dm.parity[i] * dm.parity[j]));
            out.ttheta[i][j] =
                LaurentSqrt::monomial(static_cast<int>(-dm.d[i] * dm.a[i][j]), sgn);
        }
    }
    return out;
}

std::optional<ZVec> root_coordinates(const CartanSuperdatum& dm, const ZVec& base,
                                     const ZVec& lam) {
    // solve sum_j m_j alpha_j = lam - base over Q, integrality required
    const size_t p = dm.pdim, n = dm.rank;
    std::vector<std::vector<Rat>> aug(p, std::vector<Rat>(n + 1));
    for (size_t r = 0; r < p; ++r) {
        for (size_t j = 0; j < n; ++j) aug[r][j] = Rat(dm.simple_roots[j][r]);
        aug[r][n] = Rat(lam[r] - base[r]);
    }
    size_t row = 0;
    std::vector<size_t> pivot_col;
    for (size_t col = 0; col < n && row < p; ++col) {
        size_t piv = row;
        while (piv < p && aug[piv][col] == 0) ++piv;
        if (piv == p) continue;
        std::swap(aug[piv], aug[row]);
        Rat pv = aug[row][col];
        for (size_t j = col; j <= n; ++j) aug[row][j] /= pv;
        for (size_t i = 0; i < p; ++i) {
            if (i == row || aug[i][col] == 0) continue;
            Rat f = aug[i][col];
            for (size_t j = col; j <= n; ++j) aug[i][j] -= f * aug[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (size_t i = row; i < p; ++i)
        if (aug[i][n] != 0) return std::nullopt;
    ZVec m(n, 0);
    for (size_t r = 0; r < pivot_col.size(); ++r) {
        if (denominator(aug[r][n]) != 1) return std::nullopt;
        Int v = numerator(aug[r][n]);
        m[pivot_col[r]] = static_cast<long long>(v);
    }
    return m;
}

LaurentSqrt ChiFunction::eval(const CartanSuperdatum& dm, size_t i, const ZVec& lam) const {
    auto m = root_coordinates(dm, base, lam);
    if (!m) throw std::domain_error("chi: weight is not on the base + Q orbit");
    LaurentSqrt v = base_vals[i];
    for (size_t j = 0; j < dm.rank; ++j)
        if ((*m)[j] != 0) v *= lpow(pij[i][j], (*m)[j]);
    return v;
}

ChiFunction chi_build(const CartanSuperdatum& dm, const ThetaP& tp, const ZVec& lam0) {
    ChiFunction chi;
    chi.base = lam0;
    chi.pij = tp.p_off;
    for (size_t i = 0; i < dm.rank; ++i)
        chi.base_vals.push_back(lpow(tp.p_diag[i], dm.pairing(i, lam0)));
    return chi;
}

bool gauge_equivalent(const ThetaP& f1, const ThetaP& f2, const CartanSuperdatum& dm) {
    const size_t n = dm.rank;
    for (size_t i = 0; i < n; ++i) {
        if (f1.p_off[i][i] * f1.theta[i][i].inverted_monomial() !=
            f2.p_off[i][i] * f2.theta[i][i].inverted_monomial())
            return false;
        for (size_t j = 0; j < n; ++j) {
            if (f1.p_off[i][j].pow(2) != f2.p_off[i][j].pow(2)) return false;
            LaurentSqrt r1 = f1.p_off[i][j] * f1.p_off[j][i] *
                             (f1.theta[i][j] * f1.theta[j][i]).inverted_monomial();
            LaurentSqrt r2 = f2.p_off[i][j] * f2.p_off[j][i] *
                             (f2.theta[i][j] * f2.theta[j][i]).inverted_monomial();
            if (r1 != r2) return false;
        }
    }
    return true;
}

Json laurent_sqrt_to_json(const LaurentSqrt& x) {
    Json arr = Json::array();
    for (const auto& [e, c] : x.terms()) {
        if (c.is_pi_scalar()) {
            PiScalar p = c.as_pi_scalar();
            arr.push_back(Json::array({Json(e), int_to_json(p.ev), int_to_json(p.od)}));
        } else {
            arr.push_back(Json::array({Json(e), int_to_json(c.c[0]), int_to_json(c.c[1]),
                                       int_to_json(c.c[2]), int_to_json(c.c[3])}));
        }
    }
    return arr;
}

LaurentSqrt laurent_sqrt_from_json(const Json& j) {
    LaurentSqrt x;
    for (const auto& t : j) {
        int e = t[0].get<int>();
        if (t.size() == 3) {
            x.add_term(e, SqrtPiScalar(PiScalar(int_from_json(t[1]), int_from_json(t[2]))));
        } else if (t.size() == 5) {
            SqrtPiScalar s;
            for (int k = 0; k < 4; ++k) s.c[static_cast<size_t>(k)] = int_from_json(t[k + 1]);
            x.add_term(e, s);
        } else {
            throw std::invalid_argument("laurent term: expected 3- or 5-tuple");
        }
    }
    return x;
}

Json theta_p_to_json(const ThetaP& tp) {
    Json j;
    j["name"] = tp.name;
    Json th = Json::array(), po = Json::array(), pd = Json::array();
    for (const auto& row : tp.theta) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(laurent_sqrt_to_json(x));
        th.push_back(r);
    }
    for (const auto& row : tp.p_off) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(laurent_sqrt_to_json(x));
        po.push_back(r);
    }
    for (const auto& x : tp.p_diag) pd.push_back(laurent_sqrt_to_json(x));
    j["theta"] = th;
    j["p"] = po;
    j["p_diag"] = pd;
    return j;
}

Json tilde_to_json(const TildeThetaP& tp) {
    Json j;
    j["name"] = tp.name;
    Json th = Json::array(), pd = Json::array();
    for (const auto& row : tp.ttheta) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(laurent_sqrt_to_json(x));
        th.push_back(r);
    }
    for (const auto& x : tp.tp) pd.push_back(laurent_sqrt_to_json(x));
    j["ttheta"] = th;
    j["tp"] = pd;
    return j;
}

}  // namespace qkms
