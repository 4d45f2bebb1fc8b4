#include <doctest.h>

#include <random>

#include "qkms/perfect.hpp"

using namespace qkms;

namespace {

std::mt19937_64 rng(55667u);

// rank-1 module with the dual divided-power basis: f^{(k)} v scaled by the
// inverse of its contravariant norm.  This is the basis of the dual lattice
// V^vee, where e acts with the [eps]-shaped leading coefficients.
BasedModule rank1_divided(const char* name, long long n, unsigned cutoff) {
    auto dm = cartan_preset(name);
    VermaContext ctx(dm, preset_uqsg(dm), dm.fundamental_combination(ZVec{n}));
    HWModule hw = build_hw(ctx, cutoff);
    BasedModule bm = based_from_hw(hw);
    for (size_t w = 0; w < bm.weights.size(); ++w) {
        if (bm.dims[w] == 0) continue;
        long long k = (dm.fundamental_combination(ZVec{n})[0] - bm.weights[w][0]) / 2;
        Word fk(static_cast<size_t>(k), 0);
        // tilde-factorial [k]~! of the divided power
        LaurentPi tfact{1};
        for (long long t = 2; t <= k; ++t) {
            LaurentPi ti;
            for (long long s = 0; s < t; ++s)
                ti += LaurentPi::monomial(static_cast<int>(2 * s),
                                          PiScalar::pi_pow(dm.parity[0] ? s : 0));
            tfact *= ti;
        }
        // dual vector (f^{(k)}v)^vee = [k]~! / (f^k v, f^k v) * f^k v
        RatFuncPi scale = RatFuncPi::from_laurent(tfact) /
                          RatFuncPi::from_laurent(ctx.verma_form_words(fk, fk));
        for (auto& x : bm.basis[w][0]) x = x * scale;
    }
    return bm;
}

BasedModule a2_adjoint_kernel_basis(bool kernel_adapted) {
    auto dm = cartan_preset("A2");
    VermaContext ctx(dm, preset_uqsg(dm), dm.fundamental_combination(ZVec{1, 1}));
    HWModule hw = build_hw(ctx, 4);
    BasedModule bm = based_from_hw(hw);
    if (!kernel_adapted) return bm;
    // replace the basis of the 2-dim zero-weight space by kernel vectors of
    // e_1 and e_2
    size_t w = bm.weight_index(zvec_sub(hw.lambda, dm.root_to_weight(ZVec{1, 1})));
    REQUIRE(bm.dims[w] == 2);
    for (size_t i = 0; i < 2; ++i) {
        Mat<RatFuncPi> e = bm.emat(i, w);
        // kernel of a 1x2 map: (-e01, e00) style
        PVec v(2);
        if (e(0, 0).is_zero() && e(0, 1).is_zero()) FAIL("unexpected zero e-matrix");
        v[0] = -e(0, 1);
        v[1] = e(0, 0);
        bm.basis[w][i] = v;
    }
    return bm;
}

}  // namespace

TEST_CASE("epsilon examples") {
    BasedModule bm = rank1_divided("A1odd", 2, 4);
    // highest basis vector: epsilon 0
    size_t top = bm.weight_index(ZVec{2});
    CHECK(epsilon_of(bm, top, bm.basis[top][0], 0) == 0);
    // f^{(2)} v has epsilon 2
    size_t w2 = bm.weight_index(ZVec{-2});
    CHECK(epsilon_of(bm, w2, bm.basis[w2][0], 0) == 2);
    // zero vector: -infinity
    PVec zero(1);
    CHECK(epsilon_of(bm, w2, zero, 0) == -1);
}

TEST_CASE("rank-1 divided-power bases are strong perfect") {
    for (const char* name : {"A1", "A1odd"}) {
        for (long long n : {1LL, 2LL, 3LL}) {
            BasedModule bm = rank1_divided(name, n, static_cast<unsigned>(n) + 1);
            PerfectReport rep = check_strong(bm);
            INFO(name, " n=", n, " failure=", rep.failure);
            CHECK(rep.perfect);
            CHECK(rep.strong);
            // etilde(f^{(k)} v) = f^{(k-1)} v and c = pi^e q^m [k]
            for (const auto& ent : rep.entries) {
                long long k =
                    (2 * n - (2 * n - (-bm.weights[ent.b.widx][0] + n))) / 1;  // height
                (void)k;
                CHECK(ent.axiom_b_ok);
                CHECK(ent.strong);
            }
        }
    }
}

TEST_CASE("empty module is vacuously perfect") {
    BasedModule bm;
    bm.datum = cartan_preset("A1");
    bm.e.resize(1);
    PerfectReport rep = check_perfect(bm);
    CHECK(rep.perfect);
}

TEST_CASE("strongness fails when a basis vector is rescaled by 1+q") {
    BasedModule bm = rank1_divided("A1odd", 2, 3);
    size_t w1 = bm.weight_index(ZVec{0});
    RatFuncPi one_plus_q = RatFuncPi::from_laurent(LaurentPi(1) + LaurentPi::q_pow(1));
    for (auto& x : bm.basis[w1][0]) x = x * one_plus_q;
    PerfectReport rep = check_strong(bm);
    CHECK(rep.perfect);  // still perfect: c is a unit
    CHECK(!rep.strong);  // but not of the pi^e q^m [eps] shape
}

TEST_CASE("A2 adjoint: kernel-adapted basis is perfect; pivot basis fails") {
    BasedModule good = a2_adjoint_kernel_basis(true);
    PerfectReport rep = check_perfect(good);
    INFO(rep.failure);
    CHECK(rep.perfect);

    BasedModule bad = a2_adjoint_kernel_basis(false);
    PerfectReport rep2 = check_perfect(bad);
    CHECK(!rep2.perfect);  // clause (b) or (c) fails at the 2-dim space

    // corrupting the kernel basis inside the 2-dim space also fails
    BasedModule mixed = a2_adjoint_kernel_basis(true);
    size_t w = mixed.weight_index(
        zvec_sub(mixed.weights[0], ZVec{0, 0}));  // top weight is index 0
    (void)w;
    size_t zw = mixed.weight_index(zvec_sub(
        cartan_preset("A2").fundamental_combination(ZVec{1, 1}),
        cartan_preset("A2").root_to_weight(ZVec{1, 1})));
    for (size_t r = 0; r < 2; ++r)
        mixed.basis[zw][1][r] = mixed.basis[zw][1][r] + mixed.basis[zw][0][r];
    PerfectReport rep3 = check_perfect(mixed);
    CHECK(!rep3.perfect);
}

TEST_CASE("etilde graph is invariant under diagonal unit rescaling") {
    BasedModule bm = a2_adjoint_kernel_basis(true);
    PerfectReport before = check_perfect(bm);
    REQUIRE(before.perfect);

    std::uniform_int_distribution<int> md(-2, 2), pick(0, 3);
    BasedModule scaled = bm;
    for (size_t w = 0; w < scaled.weights.size(); ++w)
        for (auto& vec : scaled.basis[w]) {
            // random unit of Q(q)^pi: monomial or a generic unit like 2+q
            RatFuncPi u;
            switch (pick(rng)) {
                case 0: u = RatFuncPi::from_laurent(LaurentPi::q_pow(md(rng))); break;
                case 1: u = RatFuncPi::from_laurent(
                            LaurentPi::monomial(md(rng), PiScalar::pi()));
                    break;
                case 2: u = RatFuncPi::from_laurent(LaurentPi(2) + LaurentPi::q_pow(1)); break;
                default: u = RatFuncPi(Rat(3)); break;
            }
            for (auto& x : vec) x = x * u;
        }
    PerfectReport after = check_perfect(scaled);
    REQUIRE(after.perfect);
    for (const auto& e1 : before.entries) {
        const PerfectEntry* e2 = after.find(e1.b, e1.i);
        REQUIRE(e2 != nullptr);
        CHECK(e1.epsilon == e2->epsilon);
        CHECK(e1.etilde == e2->etilde);
    }
}

TEST_CASE("B^H is a basis of the highest-weight space") {
    BasedModule bm = a2_adjoint_kernel_basis(true);
    // count basis vectors killed by all e_i: exactly one (v_Lambda)
    size_t count = 0;
    for (size_t w = 0; w < bm.weights.size(); ++w)
        for (const auto& v : bm.basis[w]) {
            bool hw = true;
            for (size_t i = 0; i < 2; ++i) hw = hw && vec_is_zero(bm.emat(i, w).apply(v));
            if (hw) ++count;
        }
    CHECK(count == 1);
}

TEST_CASE("preorder and e_top") {
    BasedModule bm = rank1_divided("A1odd", 2, 3);
    size_t w2 = bm.weight_index(ZVec{-2});
    size_t w1 = bm.weight_index(ZVec{0});
    // f^{(2)} v  >  f v  in the (1)-preorder
    CHECK(preorder(bm, {0}, w2, bm.basis[w2][0], w1, bm.basis[w1][0]) == Cmp::Greater);
    CHECK(preorder(bm, {0}, w1, bm.basis[w1][0], w1, bm.basis[w1][0]) == Cmp::Equiv);

    // e_top sends every strong-perfect basis vector onto the v_Lambda line
    size_t top = bm.weight_index(ZVec{2});
    for (size_t w : {w1, w2}) {
        auto [fw, fv] = e_top(bm, {0, 0}, w, bm.basis[w][0]);
        CHECK(fw == top);
        // unit multiple of v_Lambda
        REQUIRE(fv.size() == 1);
        CHECK(fv[0].is_unit());
        auto lp = fv[0].as_laurent_pi();
        REQUIRE(lp.has_value());
        CHECK(lp->terms().size() == 1);
    }
}

TEST_CASE("recognition theorem pipeline on the rank-1 lattice") {
    BasedModule bm = rank1_divided("A1odd", 2, 3);
    PerfectReport rep = check_strong(bm);
    REQUIRE(rep.strong);
    std::vector<LatticeGenerator> gens;
    for (size_t w = 0; w < bm.weights.size(); ++w)
        if (bm.dims[w] > 0) gens.push_back({bm.weights[w], bm.basis[w][0]});
    std::string witness;
    CHECK(recognition_check(bm, rep, gens, &witness));

    // trivial module Lambda = 0
    BasedModule triv = rank1_divided("A1odd", 0, 2);
    PerfectReport rt = check_strong(triv);
    std::vector<LatticeGenerator> g0 = {{triv.weights[0], triv.basis[0][0]}};
    CHECK(recognition_check(triv, rt, g0, &witness));

    // three mutation controls
    auto corrupt = [&](const RatFuncPi& scale, size_t widx) {
        auto gens2 = gens;
        for (auto& g : gens2)
            if (bm.weight_index(g.weight) == widx)
                for (auto& x : g.coords) x = x * scale;
        std::string wtn;
        bool ok = recognition_check(bm, rep, gens2, &wtn);
        INFO("witness: ", wtn);
        CHECK(!ok);
        CHECK(!wtn.empty());
    };
    LaurentPi one_q2pi = LaurentPi(1);
    one_q2pi.add_term(2, PiScalar::pi());
    corrupt(RatFuncPi(1) / RatFuncPi::from_laurent(one_q2pi), bm.weight_index(ZVec{0}));
    corrupt(RatFuncPi(1) / RatFuncPi::from_laurent(LaurentPi(1) + LaurentPi::q_pow(1)),
            bm.weight_index(ZVec{-2}));
    LaurentPi qqinv;
    qqinv.add_term(-1, PiScalar(1));
    qqinv.add_term(1, PiScalar(1));
    corrupt(RatFuncPi(1) / RatFuncPi::from_laurent(qqinv), bm.weight_index(ZVec{0}));
}

TEST_CASE("based module JSON round trip") {
    BasedModule bm = rank1_divided("A1odd", 2, 3);
    Json j = based_module_to_json(bm);
    BasedModule back = based_module_from_json(j);
    CHECK(back.weights == bm.weights);
    CHECK(back.dims == bm.dims);
    PerfectReport rep = check_strong(back);
    CHECK(rep.strong);
    Json rj = perfect_report_to_json(back, rep);
    CHECK(rj["perfect"].get<bool>());
}
