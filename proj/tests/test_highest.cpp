#include <doctest.h>

#include "qkms/highest.hpp"

using namespace qkms;

namespace {

Word W(std::initializer_list<int> letters) {
    Word w;
    for (int l : letters) w.push_back(static_cast<uint8_t>(l));
    return w;
}

VermaContext make_verma(const char* name, const ZVec& fund_coeffs) {
    auto dm = cartan_preset(name);
    return VermaContext(dm, preset_uqsg(dm), dm.fundamental_combination(fund_coeffs));
}

}  // namespace

TEST_CASE("verma form: base case and rank-1 values") {
    // (v, v) = 1
    auto ctx = make_verma("A1odd", ZVec{2});
    CHECK(ctx.verma_form_words(W({}), W({})) == LaurentPi(1));

    // <h,L> = 2, odd d=1: (f v, f v) = (1 - tp^2)/(1 - tp) = 1 + q^2 pi
    LaurentPi expect{1};
    expect.add_term(2, PiScalar::pi());
    CHECK(ctx.verma_form_words(W({0}), W({0})) == expect);

    // contravariant symmetry on a rank-2 case
    auto a2 = make_verma("A2", ZVec{1, 1});
    for (const Word& w1 : a2.words_at(ZVec{1, 1}))
        for (const Word& w2 : a2.words_at(ZVec{1, 1}))
            CHECK(a2.verma_form_words(w1, w2) == a2.verma_form_words(w2, w1));
}

TEST_CASE("irr_weight_dim examples") {
    // rank 1 odd, Lambda = 2L1: dims 1,1,1,0 at 0, a, 2a, 3a
    auto ctx = make_verma("A1odd", ZVec{2});
    CHECK(ctx.irr_weight_dim(ZVec{0}) == 1);
    CHECK(ctx.irr_weight_dim(ZVec{1}) == 1);
    CHECK(ctx.irr_weight_dim(ZVec{2}) == 1);
    CHECK(ctx.irr_weight_dim(ZVec{3}) == 0);

    // <h,L> = 1: f^2 v lies in the radical
    auto c1 = make_verma("A1odd", ZVec{1});
    CHECK(c1.irr_weight_dim(ZVec{2}) == 0);

    // A2 adjoint: zero-weight space is 2-dimensional
    auto a2 = make_verma("A2", ZVec{1, 1});
    CHECK(a2.irr_weight_dim(ZVec{0, 0}) == 1);
    CHECK(a2.irr_weight_dim(ZVec{1, 1}) == 2);
}

TEST_CASE("weyl_kac_char examples") {
    auto dm1 = cartan_preset("A1odd");
    for (long long nl = 0; nl <= 3; ++nl) {
        auto ch = weyl_kac_char(dm1, ZVec{nl}, 6);
        for (long long k = 0; k <= 6; ++k)
            CHECK(ch.at(ZVec{k}) == (k <= nl ? 1 : 0));
    }

    // A2 adjoint: total dim 8, multiplicity 2 at alpha_1 + alpha_2
    auto dm2 = cartan_preset("A2");
    auto ch2 = weyl_kac_char(dm2, ZVec{1, 1}, 6);
    CHECK(ch2.at(ZVec{1, 1}) == 2);
    long long total = 0;
    for (const auto& [b, v] : ch2) total += v;
    CHECK(total == 8);

    // Lambda = 0 is the trivial module
    auto ch0 = weyl_kac_char(dm2, ZVec{0, 0}, 5);
    for (const auto& [b, v] : ch0) CHECK(v == (zvec_height(b) == 0 ? 1 : 0));

    // B2, Lambda_1
    auto dmb = cartan_preset("B2");
    auto chb = weyl_kac_char(dmb, ZVec{1, 0}, 6);
    long long totalb = 0;
    for (const auto& [b, v] : chb) totalb += v;
    CHECK(totalb == 5);
}

TEST_CASE("irr_weight_dim agrees with weyl_kac_char (central cross-oracle)") {
    struct Case {
        const char* name;
        ZVec fund;
        unsigned cutoff;
    };
    for (const Case& c : {Case{"A1odd", {1}, 5}, Case{"A1odd", {3}, 5},
                          Case{"A2", {1, 1}, 4}, Case{"B2", {1, 0}, 5}}) {
        auto dm = cartan_preset(c.name);
        ZVec lam = dm.fundamental_combination(c.fund);
        auto ctx = VermaContext(dm, preset_uqsg(dm), lam);
        auto ch = weyl_kac_char(dm, lam, c.cutoff);
        for (const auto& [beta, v] : ch) {
            INFO(c.name, " beta height ", zvec_height(beta));
            CHECK(ctx.irr_weight_dim(beta) == static_cast<size_t>(v));
        }
    }
}

TEST_CASE("invariance of characters under the rho choice") {
    // any rho with <h_i, rho> = 1 gives the same character table
    auto dm = cartan_preset("A1affine");
    auto ch1 = weyl_kac_char(dm, dm.fundamental_combination(ZVec{1, 0}), 4);
    auto dm2 = dm;
    dm2.rho = {1, 1, 7};  // add a null direction
    REQUIRE(!validate(dm2).has_value());
    auto ch2 = weyl_kac_char(dm2, dm2.fundamental_combination(ZVec{1, 0}), 4);
    CHECK(ch1 == ch2);
}

TEST_CASE("build_hw and check_EF on the preset suite") {
    struct Case {
        const char* name;
        ZVec fund;
        unsigned cutoff;
    };
    for (const Case& c : {Case{"A1", {2}, 4}, Case{"A1odd", {2}, 4},
                          Case{"A2", {1, 1}, 4}, Case{"B2", {1, 0}, 5}}) {
        auto dm = cartan_preset(c.name);
        VermaContext ctx(dm, preset_uqsg(dm), dm.fundamental_combination(c.fund));
        HWModule hw = build_hw(ctx, c.cutoff);
        INFO(c.name);
        CHECK(check_EF(hw));
        CHECK(!check_EF(hw, /*corrupt_comm_sign=*/true));
    }
}

TEST_CASE("rank-1 block scalars: E F - pi q^-2 F E on the first block") {
    // <h,L> = 2, odd: at weight L - a the scalar (1-tp^0)/(1-tp) vanishes
    auto dm = cartan_preset("A1odd");
    VermaContext ctx(dm, preset_uqsg(dm), dm.fundamental_combination(ZVec{2}));
    HWModule hw = build_hw(ctx, 3);
    ZVec b1{1};
    auto lhs = hw.emat(0, ZVec{2}) * hw.fmat(0, b1);
    auto rhs = (hw.fmat(0, ZVec{0}) * hw.emat(0, b1))
                   .scaled(RatFuncSqrt(RatFuncPi::from_laurent(
                       to_pi(hw.family.tilde.ttheta[0][0]))));
    CHECK((lhs - rhs).is_zero());

    // E F v = [<h,L>]-type scalar never vanishes at the top
    auto top = hw.emat(0, b1) * hw.fmat(0, ZVec{0});
    CHECK(!top.is_zero());
}

TEST_CASE("divided power identity on rank-1 modules, both parities") {
    for (const char* name : {"A1", "A1odd"}) {
        auto dm = cartan_preset(name);
        VermaContext ctx(dm, preset_uqsg(dm), dm.fundamental_combination(ZVec{3}));
        HWModule hw = build_hw(ctx, 5);
        for (unsigned n = 1; n <= 3; ++n)
            for (unsigned m = 1; m <= 3; ++m) {
                INFO(name, " n=", n, " m=", m);
                CHECK(check_divided_powers(hw, n, m, 0));
            }
        CHECK(check_divided_powers(hw, 1, 1, 0));  // reduces to check_EF diagonal
    }
    // a rank-2 spot check
    auto dm = cartan_preset("A2");
    VermaContext ctx(dm, preset_uqsg(dm), dm.fundamental_combination(ZVec{1, 1}));
    HWModule hw = build_hw(ctx, 4);
    CHECK(check_divided_powers(hw, 2, 2, 0));
    CHECK(check_divided_powers(hw, 2, 1, 1));
}

TEST_CASE("nilpotency shadow within the cutoff") {
    struct Case {
        const char* name;
        ZVec fund;
        unsigned cutoff;
    };
    for (const Case& c : {Case{"A1odd", {2}, 6}, Case{"A2", {1, 1}, 6}}) {
        auto dm = cartan_preset(c.name);
        ZVec lam = dm.fundamental_combination(c.fund);
        VermaContext ctx(dm, preset_uqsg(dm), lam);
        for (const ZVec& beta :
             std::vector<ZVec>{ZVec(dm.rank, 0)}) {
            for (size_t i = 0; i < dm.rank; ++i) {
                long long bound = nilpotency_bound(dm, lam, beta, i);
                for (long long k = bound; ; ++k) {
                    ZVec b = beta;
                    b[i] += k;
                    if (zvec_height(b) > c.cutoff) break;
                    CHECK(ctx.irr_weight_dim(b) == 0);
                }
            }
        }
    }
}

TEST_CASE("theta-family transport satisfies check_EF") {
    for (const char* name : {"A1", "A1odd", "A2"}) {
        auto dm = cartan_preset(name);
        auto u = preset_uqsg(dm);
        ZVec lam = dm.fundamental_combination(dm.rank == 1 ? ZVec{2} : ZVec{1, 1});
        VermaContext ctx(dm, u, lam);
        HWModule hw = build_hw(ctx, 4);
        auto lift = lift_tilde(u, dm, default_sqrt_choice(dm));
        HWModule hwf = to_theta_family(hw, lift);
        INFO(name);
        CHECK(check_EF(hwf));
        for (const ZVec& b : hw.betas) CHECK(hw.dim_at(b) == hwf.dim_at(b));
    }
}

TEST_CASE("gauge transport: Uqsg lift <-> boldU, boldU <-> BKM") {
    for (const char* name : {"A1", "A1odd", "A2"}) {
        auto dm = cartan_preset(name);
        auto u = preset_uqsg(dm);
        ZVec lam = dm.fundamental_combination(dm.rank == 1 ? ZVec{2} : ZVec{1, 1});
        VermaContext ctx(dm, u, lam);
        HWModule hw = build_hw(ctx, 4);
        auto choice = default_sqrt_choice(dm);
        auto lift = lift_tilde(u, dm, choice);
        HWModule hwf = to_theta_family(hw, lift);

        // identity transform
        HWModule same = gauge_transform(hwf, lift);
        CHECK(check_EF(same));

        // to boldU
        auto bold = preset_theta_p("boldU", dm, choice);
        HWModule hb = gauge_transform(hwf, bold);
        INFO(name);
        CHECK(check_EF(hb));
        for (const ZVec& b : hw.betas) CHECK(hw.dim_at(b) == hb.dim_at(b));

        // boldU to BKM (theta matrices differ for odd data / alt choices)
        auto bkm = preset_theta_p("BKM", dm, choice);
        HWModule hk = gauge_transform(hb, bkm);
        CHECK(check_EF(hk));

        // boldU with the alternate sqrt(pi_i) choice: theta differ, p_i equal
        auto bold_alt = preset_theta_p("boldU", dm, pi_sqrt_choice(dm));
        HWModule ha = gauge_transform(hb, bold_alt);
        CHECK(check_EF(ha));
        for (const ZVec& b : hw.betas) CHECK(hw.dim_at(b) == ha.dim_at(b));
    }
}

TEST_CASE("quantum Casimir: omega-hat is the identity and commutes") {
    struct Case {
        const char* name;
        ZVec fund;
        unsigned cutoff;
    };
    for (const Case& c : {Case{"A1", {2}, 4}, Case{"A1odd", {2}, 4},
                          Case{"A2", {1, 1}, 3}}) {
        auto dm = cartan_preset(c.name);
        auto u = preset_uqsg(dm);
        ZVec lam = dm.fundamental_combination(c.fund);
        VermaContext ctx(dm, u, lam);
        HWModule hw = build_hw(ctx, c.cutoff);
        auto choice = default_sqrt_choice(dm);
        auto bold = preset_theta_p("boldU", dm, choice);
        HWModule hb = gauge_transform(to_theta_family(hw, lift_tilde(u, dm, choice)), bold);
        UMinusContext ub(BosonParams::from_tilde(dm, derive_tilde(bold)));
        CasimirContext cas = casimir_build(hb, ub);
        INFO(c.name);
        CHECK(casimir_check(hb, cas));
        // omega-hat on v_Lambda is v_Lambda
        CHECK(cas.omega_hat.at(ZVec(dm.rank, 0)) == Mat<RatFuncSqrt>::identity(1));
    }
}
