#include <doctest.h>

#include <random>

#include "qkms/params.hpp"

using namespace qkms;

namespace {
std::mt19937_64 rng(31415u);

LaurentSqrt sq(const char* /*tag*/, int e, SqrtPiScalar c) {
    return LaurentSqrt::monomial(e, c);
}
}  // namespace

TEST_CASE("preset Uqsg on A1odd: tp = q^2 pi, ttheta = pi q^-2") {
    auto dm = cartan_preset("A1odd");
    auto u = preset_uqsg(dm);
    CHECK(u.tp[0] == sq("", 2, SqrtPiScalar::pi()));
    CHECK(u.ttheta[0][0] == sq("", -2, SqrtPiScalar::pi()));
    CHECK(!check_ttp(u, dm).has_value());

    // drop pi from ttheta_11: the condition ttheta_ii = tp_i^{-1} must fail
    auto bad = u;
    bad.ttheta[0][0] = LaurentSqrt::q_pow(-2);
    auto v = check_ttp(bad, dm);
    REQUIRE(v.has_value());
    CHECK(v->axiom == "ttheta_ii = tp_i^{-1}");
}

TEST_CASE("preset BKM on A1 even collapses to q-identities") {
    auto dm = cartan_preset("A1");
    auto f = preset_theta_p("BKM", dm, default_sqrt_choice(dm));
    CHECK(f.theta[0][0] == LaurentSqrt(1));
    CHECK(f.p_diag[0] == LaurentSqrt::q_pow(1));
    CHECK(!check_pt(f, dm).has_value());
}

TEST_CASE("preset boldU on all-even A2 has theta = 1") {
    auto dm = cartan_preset("A2");
    auto f = preset_theta_p("boldU", dm, default_sqrt_choice(dm));
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) CHECK(f.theta[i][j] == LaurentSqrt(1));
    CHECK(!check_pt(f, dm).has_value());
}

TEST_CASE("all presets satisfy their conditions on the datum suite") {
    for (const char* name : {"A1", "A1odd", "A2", "B2"}) {
        auto dm = cartan_preset(name);
        auto choice = default_sqrt_choice(dm);
        INFO("datum ", name);
        CHECK(!check_pt(preset_theta_p("BKM", dm, choice), dm).has_value());
        CHECK(!check_pt(preset_theta_p("boldU", dm, choice), dm).has_value());
        CHECK(!check_ttp(preset_uqsg(dm), dm).has_value());
        // alternate sqrt choice is admitted as well
        auto alt = pi_sqrt_choice(dm);
        CHECK(!check_pt(preset_theta_p("BKM", dm, alt), dm).has_value());
        CHECK(!check_pt(preset_theta_p("boldU", dm, alt), dm).has_value());
    }
}

TEST_CASE("derive_tilde lands in the tilde condition and matches Uqsg") {
    // A1odd boldU: ttheta_11 = theta_11 p_11^{-1} = (q sqrt(pi))^{-2} = pi q^{-2}
    auto dm = cartan_preset("A1odd");
    auto f = preset_theta_p("boldU", dm, default_sqrt_choice(dm));
    auto t = derive_tilde(f);
    CHECK(t.ttheta[0][0] == sq("", -2, SqrtPiScalar::pi()));
    CHECK(t.tp[0] == preset_uqsg(dm).tp[0]);
    CHECK(!check_ttp(t, dm).has_value());

    // rank 1 even, theta = 1, p = q: ttheta_11 = q^-2
    auto dme = cartan_preset("A1");
    auto fe = preset_theta_p("boldU", dme, default_sqrt_choice(dme));
    CHECK(derive_tilde(fe).ttheta[0][0] == LaurentSqrt::q_pow(-2));

    // A2 boldU: symmetric tilde matrix
    auto dm2 = cartan_preset("A2");
    auto t2 = derive_tilde(preset_theta_p("boldU", dm2, default_sqrt_choice(dm2)));
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) CHECK(t2.ttheta[i][j] == t2.ttheta[j][i]);

    // derive_tilde of any cond-pt family passes the tilde condition
    for (const char* name : {"A1", "A1odd", "A2", "B2"}) {
        auto d = cartan_preset(name);
        for (const char* fam : {"BKM", "boldU"}) {
            auto th = preset_theta_p(fam, d, default_sqrt_choice(d));
            CHECK(!check_ttp(derive_tilde(th), d).has_value());
        }
    }
}

TEST_CASE("lift_tilde satisfies cond-pt and round-trips the tilde data") {
    for (const char* name : {"A1", "A1odd", "A2", "B2"}) {
        auto dm = cartan_preset(name);
        auto u = preset_uqsg(dm);
        auto lift = lift_tilde(u, dm, default_sqrt_choice(dm));
        CHECK(!check_pt(lift, dm).has_value());
        auto back = derive_tilde(lift);
        CHECK(back.ttheta == u.ttheta);
        CHECK(back.tp == u.tp);
    }
}

TEST_CASE("chi examples and the chi condition on random lattice points") {
    auto dm = cartan_preset("A1");
    auto f = preset_theta_p("BKM", dm, default_sqrt_choice(dm));
    ZVec L1 = {1};
    auto chi = chi_build(dm, f, L1);
    CHECK(chi.eval(dm, 0, L1) == LaurentSqrt::q_pow(1));
    ZVec down = zvec_sub(L1, dm.simple_roots[0]);
    CHECK(chi.eval(dm, 0, down) == LaurentSqrt::q_pow(-1));

    // base with <h, lam0> = 0 gives chi(lam0) = 1
    auto dm2 = cartan_preset("A2");
    auto f2 = preset_theta_p("boldU", dm2, default_sqrt_choice(dm2));
    ZVec zero = {0, 0};
    auto chi2 = chi_build(dm2, f2, zero);
    CHECK(chi2.eval(dm2, 0, zero) == LaurentSqrt(1));
    CHECK(chi2.eval(dm2, 1, zero) == LaurentSqrt(1));

    // chi condition: chi^2 = p_i^{2<h_i,lam>}, chi(lam+alpha_j) = p_ij chi(lam)
    std::uniform_int_distribution<long long> rd(-3, 3);
    for (const char* name : {"A1odd", "A2", "B2"}) {
        auto d = cartan_preset(name);
        for (const char* fam : {"BKM", "boldU"}) {
            auto th = preset_theta_p(fam, d, default_sqrt_choice(d));
            ZVec lam0(d.pdim);
            for (auto& x : lam0) x = rd(rng);
            auto c = chi_build(d, th, lam0);
            for (int round = 0; round < 6; ++round) {
                ZVec m(d.rank);
                for (auto& x : m) x = rd(rng);
                ZVec lam = lam0;
                for (size_t j = 0; j < d.rank; ++j)
                    lam = zvec_add(lam, zvec_scale(d.simple_roots[j], m[j]));
                for (size_t i = 0; i < d.rank; ++i) {
                    CHECK(c.eval(d, i, lam).pow(2) ==
                          lpow(th.p_diag[i], 2 * d.pairing(i, lam)));
                    for (size_t j = 0; j < d.rank; ++j)
                        CHECK(c.eval(d, i, zvec_add(lam, d.simple_roots[j])) ==
                              th.p_off[i][j] * c.eval(d, i, lam));
                }
            }
        }
    }
}

TEST_CASE("Uqsg eigenvalue convention: chi^2 equals tp^{<h,lam>}") {
    auto dm = cartan_preset("A1odd");
    auto u = preset_uqsg(dm);
    auto lift = lift_tilde(u, dm, default_sqrt_choice(dm));
    auto chi = chi_build(dm, lift, ZVec{1});
    for (long long k : {0LL, 1LL, 2LL}) {
        ZVec lam = zvec_sub(ZVec{1}, zvec_scale(dm.simple_roots[0], k));
        CHECK(chi.eval(dm, 0, lam).pow(2) == lpow(u.tp[0], dm.pairing(0, lam)));
    }
}

TEST_CASE("gauge classes: boldU, BKM and the Uqsg lift coincide") {
    for (const char* name : {"A1", "A1odd", "A2", "B2"}) {
        auto dm = cartan_preset(name);
        auto choice = default_sqrt_choice(dm);
        auto bold = preset_theta_p("boldU", dm, choice);
        auto bkm = preset_theta_p("BKM", dm, choice);
        auto lift = lift_tilde(preset_uqsg(dm), dm, choice);
        CHECK(gauge_equivalent(bold, bkm, dm));
        CHECK(gauge_equivalent(bold, lift, dm));
        // and with the alternate sqrt(pi_i) choice
        auto bold2 = preset_theta_p("boldU", dm, pi_sqrt_choice(dm));
        CHECK(gauge_equivalent(bold, bold2, dm));
    }
}

TEST_CASE("parameter JSON round trip") {
    auto dm = cartan_preset("B2");
    auto f = preset_theta_p("boldU", dm, default_sqrt_choice(dm));
    Json j = theta_p_to_json(f);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(laurent_sqrt_from_json(j["p_diag"][i]) == f.p_diag[i]);
        for (size_t k = 0; k < 2; ++k) {
            CHECK(laurent_sqrt_from_json(j["theta"][i][k]) == f.theta[i][k]);
            CHECK(laurent_sqrt_from_json(j["p"][i][k]) == f.p_off[i][k]);
        }
    }
    auto dmo = cartan_preset("A1odd");
    auto fo = preset_theta_p("boldU", dmo, default_sqrt_choice(dmo));
    CHECK(laurent_sqrt_from_json(laurent_sqrt_to_json(fo.p_diag[0])) == fo.p_diag[0]);
}
