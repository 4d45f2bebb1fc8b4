#include "qkms/verify.hpp"

#include <chrono>
#include <functional>

namespace qkms {

namespace {

using Clock = std::chrono::steady_clock;

CheckResult timed(const std::string& name, const std::function<std::pair<bool, std::string>()>& f) {
    CheckResult r;
    r.name = name;
    auto t0 = Clock::now();
    try {
        auto [ok, detail] = f();
        r.pass = ok;
        r.detail = detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

std::vector<ZVec> box(size_t rank, unsigned cutoff) {
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

ZVec default_lambda(const CartanSuperdatum& dm) {
    if (dm.rank == 1) return dm.fundamental_combination(ZVec{2});
    if (dm.name == "B2") return dm.fundamental_combination(ZVec{1, 0});
    ZVec ones(dm.rank, 1);
    return dm.fundamental_combination(ones);
}

std::pair<bool, std::string> uminus_character_check(const std::string& preset,
                                                    unsigned cutoff, unsigned jobs) {
    auto dm = cartan_preset(preset);
    UMinusContext ctx(BosonParams::from_tilde(dm, preset_uqsg(dm)), jobs);
    for (const ZVec& beta : box(dm.rank, cutoff)) {
        if (zvec_height(beta) == 0) continue;
        size_t rank = ctx.weight_dim(beta);
        long long want = ctx.product_formula_dim(beta);
        if (rank != static_cast<size_t>(want))
            return {false, preset + ": mismatch at a weight of height " +
                               std::to_string(zvec_height(beta))};
    }
    return {true, preset + " heights <= " + std::to_string(cutoff)};
}

HWModule build_suite_module(const std::string& preset, unsigned cutoff) {
    auto dm = cartan_preset(preset);
    VermaContext ctx(dm, preset_uqsg(dm), default_lambda(dm));
    return build_hw(ctx, cutoff);
}

std::pair<bool, std::string> recognition_battery() {
    // dual divided-power basis on A1odd, Lambda = 2L1
    auto dm = cartan_preset("A1odd");
    ZVec lam = dm.fundamental_combination(ZVec{2});
    VermaContext ctx(dm, preset_uqsg(dm), lam);
    HWModule hw = build_hw(ctx, 3);
    BasedModule bm = based_from_hw(hw);
    for (size_t w = 0; w < bm.weights.size(); ++w) {
        if (bm.dims[w] == 0) continue;
        long long k = (lam[0] - bm.weights[w][0]) / 2;
        Word fk(static_cast<size_t>(k), 0);
        LaurentPi tfact{1};
        for (long long t = 2; t <= k; ++t) {
            LaurentPi ti;
            for (long long s = 0; s < t; ++s)
                ti += LaurentPi::monomial(static_cast<int>(2 * s), PiScalar::pi_pow(s));
            tfact *= ti;
        }
        RatFuncPi scale = RatFuncPi::from_laurent(tfact) /
                          RatFuncPi::from_laurent(ctx.verma_form_words(fk, fk));
        for (auto& x : bm.basis[w][0]) x = x * scale;
    }
    PerfectReport rep = check_strong(bm);
    if (!rep.perfect) return {false, "divided-power basis not perfect: " + rep.failure};
    if (!rep.strong) return {false, "divided-power basis not strong: " + rep.failure};
    for (const auto& e : rep.entries)
        if (!e.strong) return {false, "entry without a pi^e q^m [eps] certificate"};

    std::vector<LatticeGenerator> gens;
    for (size_t w = 0; w < bm.weights.size(); ++w)
        if (bm.dims[w] > 0) gens.push_back({bm.weights[w], bm.basis[w][0]});
    std::string witness;
    if (!recognition_check(bm, rep, gens, &witness))
        return {false, "recognition failed on the honest lattice: " + witness};

    // three mutation controls must be rejected
    auto corrupt = [&](const RatFuncPi& scale, const ZVec& at) {
        auto gens2 = gens;
        for (auto& g : gens2)
            if (g.weight == at)
                for (auto& x : g.coords) x = x * scale;
        std::string wtn;
        return !recognition_check(bm, rep, gens2, &wtn);
    };
    LaurentPi u1 = LaurentPi(1);
    u1.add_term(2, PiScalar::pi());
    LaurentPi u2 = LaurentPi(1) + LaurentPi::q_pow(1);
    LaurentPi u3;
    u3.add_term(-1, PiScalar(1));
    u3.add_term(1, PiScalar(1));
    int rejected = 0;
    rejected += corrupt(RatFuncPi(1) / RatFuncPi::from_laurent(u1), ZVec{0});
    rejected += corrupt(RatFuncPi(1) / RatFuncPi::from_laurent(u2), ZVec{-2});
    rejected += corrupt(RatFuncPi(1) / RatFuncPi::from_laurent(u3), ZVec{0});
    if (rejected != 3)
        return {false, "only " + std::to_string(rejected) + "/3 mutation controls rejected"};
    return {true, "strong certificates + recognition + 3/3 controls rejected"};
}

}  // namespace

std::vector<CheckResult> verify_preset(const std::string& preset, const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    auto dm = cartan_preset(preset);

    out.push_back(timed("cartan axioms", [&]() -> std::pair<bool, std::string> {
        auto v = validate(dm);
        if (v) return {false, v->axiom + ": " + v->detail};
        return {true, "all datum invariants hold"};
    }));

    out.push_back(timed("q-binomial identity (n <= 8)", [&]() -> std::pair<bool, std::string> {
        BivarPi a = BivarPi::var_a(), b = BivarPi::var_b();
        for (unsigned n = 0; n <= 8; ++n)
            if (!bino_identity_check(n, a, b)) return {false, "fails at n=" + std::to_string(n)};
        return {true, "exact over Z[a,b,pi]"};
    }));

    out.push_back(timed("parameter conditions", [&]() -> std::pair<bool, std::string> {
        auto choice = default_sqrt_choice(dm);
        if (auto v = check_pt(preset_theta_p("BKM", dm, choice), dm))
            return {false, "BKM: " + v->axiom};
        if (auto v = check_pt(preset_theta_p("boldU", dm, choice), dm))
            return {false, "boldU: " + v->axiom};
        if (auto v = check_ttp(preset_uqsg(dm), dm)) return {false, "Uqsg: " + v->axiom};
        if (auto v = check_ttp(derive_tilde(preset_theta_p("boldU", dm, choice)), dm))
            return {false, "derive_tilde(boldU): " + v->axiom};
        return {true, "cond-pt and cond-ttp verified"};
    }));

    UMinusContext uctx(BosonParams::from_tilde(dm, preset_uqsg(dm)), opt.jobs);
    out.push_back(timed("boson algebra relations", [&]() -> std::pair<bool, std::string> {
        bool ok = uctx.boson_relation_check(opt.boson_cutoff);
        return {ok, ok ? "e'-Serre and e'e* commutation close" : "relation failure"};
    }));

    out.push_back(timed("U^- character vs product formula", [&]() {
        return uminus_character_check(preset, opt.height_cutoff, opt.jobs);
    }));

    if (dm.rank >= 2) {
        out.push_back(timed("Serre elements in the radical", [&]() -> std::pair<bool, std::string> {
            for (size_t i = 0; i < dm.rank; ++i)
                for (size_t j = 0; j < dm.rank; ++j) {
                    if (i == j) continue;
                    if (!uctx.serre_in_radical(i, j))
                        return {false, "pairing nonzero at (i,j)=(" + std::to_string(i + 1) +
                                           "," + std::to_string(j + 1) + ")"};
                }
            return {true, "all Serre elements pair to zero"};
        }));
    }

    ZVec lam = default_lambda(dm);
    VermaContext vctx(dm, preset_uqsg(dm), lam);
    HWModule hw = build_hw(vctx, opt.height_cutoff);

    out.push_back(timed("irreducible character vs Weyl-Kac", [&]() -> std::pair<bool, std::string> {
        auto ch = weyl_kac_char(dm, lam, opt.height_cutoff);
        for (const auto& [beta, v] : ch)
            if (vctx.irr_weight_dim(beta) != static_cast<size_t>(v))
                return {false, "disagreement at height " + std::to_string(zvec_height(beta))};
        return {true, "Gram ranks match the Weyl-Kac coefficients"};
    }));

    out.push_back(timed("super-commutation on interior blocks", [&]() -> std::pair<bool, std::string> {
        if (!check_EF(hw)) return {false, "relation failed"};
        if (check_EF(hw, true)) return {false, "negative control passed unexpectedly"};
        return {true, "holds; sign-flip control fails as required"};
    }));

    if (dm.rank == 1) {
        out.push_back(timed("divided-power identity", [&]() -> std::pair<bool, std::string> {
            for (unsigned n = 1; n <= 3; ++n)
                for (unsigned m = 1; m <= 3; ++m)
                    if (!check_divided_powers(hw, n, m, 0))
                        return {false, "fails at n=" + std::to_string(n) + " m=" + std::to_string(m)};
            return {true, "n, m <= 3"};
        }));
    }

    out.push_back(timed("nilpotency shadow", [&]() -> std::pair<bool, std::string> {
        for (size_t i = 0; i < dm.rank; ++i) {
            long long bound = nilpotency_bound(dm, lam, ZVec(dm.rank, 0), i);
            for (long long k = bound; k <= static_cast<long long>(opt.height_cutoff); ++k) {
                ZVec b(dm.rank, 0);
                b[i] = k;
                if (vctx.irr_weight_dim(b) != 0) return {false, "nonzero beyond the bound"};
            }
        }
        return {true, "weight spaces vanish beyond the bound"};
    }));

    if (dm.name != "A1affine") {
        out.push_back(timed("gauge transport", [&]() -> std::pair<bool, std::string> {
            auto choice = default_sqrt_choice(dm);
            auto lift = lift_tilde(preset_uqsg(dm), dm, choice);
            HWModule hf = to_theta_family(hw, lift);
            if (!check_EF(hf)) return {false, "theta-family transport failed"};
            HWModule hb = gauge_transform(hf, preset_theta_p("boldU", dm, choice));
            if (!check_EF(hb)) return {false, "boldU transport failed"};
            HWModule hk = gauge_transform(hb, preset_theta_p("BKM", dm, choice));
            if (!check_EF(hk)) return {false, "BKM transport failed"};
            HWModule ha = gauge_transform(hb, preset_theta_p("boldU", dm, pi_sqrt_choice(dm)));
            if (!check_EF(ha)) return {false, "alternate sqrt-choice transport failed"};
            for (const ZVec& b : hw.betas)
                if (hw.dim_at(b) != hb.dim_at(b) || hw.dim_at(b) != hk.dim_at(b))
                    return {false, "weight dimensions changed under transport"};
            return {true, "Uqsg-lift <-> boldU <-> BKM with unchanged dimensions"};
        }));

        out.push_back(timed("quantum Casimir", [&]() -> std::pair<bool, std::string> {
            auto choice = default_sqrt_choice(dm);
            unsigned cas_cutoff = std::min(opt.height_cutoff, dm.rank == 1 ? 4u : 3u);
            VermaContext vc2(dm, preset_uqsg(dm), lam);
            HWModule small = build_hw(vc2, cas_cutoff);
            auto bold = preset_theta_p("boldU", dm, choice);
            HWModule hb = gauge_transform(
                to_theta_family(small, lift_tilde(preset_uqsg(dm), dm, choice)), bold);
            UMinusContext ub(BosonParams::from_tilde(dm, derive_tilde(bold)), opt.jobs);
            CasimirContext cas = casimir_build(hb, ub);
            bool ok = casimir_check(hb, cas);
            return {ok, ok ? "omega-hat = id and commutes on interior blocks"
                           : "Casimir check failed"};
        }));
    }

    out.push_back(timed("quiver Hecke rewriter", [&]() -> std::pair<bool, std::string> {
        for (const char* qp : {"A2", "C6"}) {
            for (size_t n : {2u, 3u}) {
                QHSContext ctx(qparams_preset(qp), n);
                if (!ctx.relations_close())
                    return {false, std::string(qp) + ": relations fail at n=" + std::to_string(n)};
            }
            QHSContext ctx4(qparams_preset(qp), 4);
            if (!ctx4.associativity_fuzz(opt.qhs_fuzz / 8, opt.seed))
                return {false, std::string(qp) + ": associativity fuzz failed"};
            for (uint8_t i = 0; i < qparams_preset(qp).datum.rank; ++i) {
                QHSElement b = ctx4.b_longest(i);
                if (!(ctx4.multiply(b, b) == b))
                    return {false, std::string(qp) + ": b(i^4) not idempotent"};
            }
        }
        return {true, "relations close; fuzz and b-idempotents pass"};
    }));

    out.push_back(timed("strong perfect basis + recognition", [&]() {
        return recognition_battery();
    }));

    return out;
}

std::vector<CheckResult> acceptance_criteria(unsigned jobs) {
    std::vector<CheckResult> out;

    out.push_back(timed("C1 q-binomial identity, n <= 8, < 1 s", []() -> std::pair<bool, std::string> {
        auto t0 = Clock::now();
        BivarPi a = BivarPi::var_a(), b = BivarPi::var_b();
        for (unsigned n = 0; n <= 8; ++n)
            if (!bino_identity_check(n, a, b)) return {false, "fails at n=" + std::to_string(n)};
        double s = std::chrono::duration<double>(Clock::now() - t0).count();
        if (s >= 1.0) return {false, "too slow: " + std::to_string(s) + " s"};
        return {true, "exact over Z[a^{+-1}, b^{+-1}, pi]"};
    }));

    out.push_back(timed("C2 U^- character, |beta| <= 6, 4 presets, < 60 s", [&]() -> std::pair<bool, std::string> {
        auto t0 = Clock::now();
        for (const char* p : {"A1", "A1odd", "A2", "B2"}) {
            auto [ok, detail] = uminus_character_check(p, 6, jobs);
            if (!ok) return {false, detail};
        }
        double s = std::chrono::duration<double>(Clock::now() - t0).count();
        if (s >= 60.0) return {false, "too slow: " + std::to_string(s) + " s"};
        return {true, "Gram ranks (both pi-components) match the product formula"};
    }));

    out.push_back(timed("C3 Serre radical on A2 and B2", [&]() -> std::pair<bool, std::string> {
        for (const char* p : {"A2", "B2"}) {
            auto dm = cartan_preset(p);
            UMinusContext ctx(BosonParams::from_tilde(dm, preset_uqsg(dm)), jobs);
            for (size_t i = 0; i < dm.rank; ++i)
                for (size_t j = 0; j < dm.rank; ++j)
                    if (i != j && !ctx.serre_in_radical(i, j))
                        return {false, std::string(p) + ": Serre element pairs nonzero"};
        }
        return {true, "all Serre elements pair to zero with every same-weight word"};
    }));

    out.push_back(timed("C4 irreducible characters vs Weyl-Kac, height <= 6", [&]() -> std::pair<bool, std::string> {
        struct Case {
            const char* name;
            ZVec fund;
        };
        std::vector<Case> cases;
        for (long long n = 1; n <= 4; ++n) cases.push_back({"A1odd", ZVec{n}});
        cases.push_back({"A2", ZVec{1, 1}});
        cases.push_back({"B2", ZVec{1, 0}});
        for (const auto& c : cases) {
            auto dm = cartan_preset(c.name);
            ZVec lam = dm.fundamental_combination(c.fund);
            VermaContext ctx(dm, preset_uqsg(dm), lam);
            auto ch = weyl_kac_char(dm, lam, 6);
            for (const auto& [beta, v] : ch)
                if (ctx.irr_weight_dim(beta) != static_cast<size_t>(v))
                    return {false, std::string(c.name) + ": mismatch"};
        }
        // the A2 adjoint shape
        auto dm = cartan_preset("A2");
        auto ch = weyl_kac_char(dm, dm.fundamental_combination(ZVec{1, 1}), 6);
        long long total = 0;
        for (const auto& [b, v] : ch) total += v;
        if (total != 8 || ch.at(ZVec{1, 1}) != 2)
            return {false, "A2 adjoint: dim/multiplicity shape wrong"};
        return {true, "both oracles agree; A2 adjoint has dim 8 with multiplicity 2"};
    }));

    out.push_back(timed("C5 super-commutation + negative control", [&]() -> std::pair<bool, std::string> {
        for (const char* p : {"A1", "A1odd", "A2", "B2"}) {
            HWModule hw = build_suite_module(p, 5);
            if (!check_EF(hw)) return {false, std::string(p) + ": relation fails"};
            if (check_EF(hw, true))
                return {false, std::string(p) + ": sign-flip control unexpectedly passes"};
        }
        return {true, "matrix identity exact on all interior blocks; controls fail"};
    }));

    out.push_back(timed("C6 divided-power identity, n,m <= 3, both parities", [&]() -> std::pair<bool, std::string> {
        for (const char* p : {"A1", "A1odd"}) {
            auto dm = cartan_preset(p);
            VermaContext ctx(dm, preset_uqsg(dm), dm.fundamental_combination(ZVec{3}));
            HWModule hw = build_hw(ctx, 6);
            for (unsigned n = 1; n <= 3; ++n)
                for (unsigned m = 1; m <= 3; ++m)
                    if (!check_divided_powers(hw, n, m, 0))
                        return {false, std::string(p) + ": fails at (" + std::to_string(n) +
                                           "," + std::to_string(m) + ")"};
        }
        return {true, "matrix identity exact on rank-1 modules"};
    }));

    out.push_back(timed("C7 quantum Casimir", [&]() -> std::pair<bool, std::string> {
        struct Case {
            const char* name;
            ZVec fund;
            unsigned cutoff;
        };
        std::vector<Case> cases;
        for (long long n = 1; n <= 3; ++n) {
            cases.push_back({"A1", ZVec{n}, 4});
            cases.push_back({"A1odd", ZVec{n}, 4});
        }
        cases.push_back({"A2", ZVec{1, 1}, 3});
        for (const auto& c : cases) {
            auto dm = cartan_preset(c.name);
            auto choice = default_sqrt_choice(dm);
            ZVec lam = dm.fundamental_combination(c.fund);
            VermaContext ctx(dm, preset_uqsg(dm), lam);
            HWModule hw = build_hw(ctx, c.cutoff);
            auto bold = preset_theta_p("boldU", dm, choice);
            HWModule hb = gauge_transform(
                to_theta_family(hw, lift_tilde(preset_uqsg(dm), dm, choice)), bold);
            UMinusContext ub(BosonParams::from_tilde(dm, derive_tilde(bold)), jobs);
            CasimirContext cas = casimir_build(hb, ub);
            if (!casimir_check(hb, cas))
                return {false, std::string(c.name) + ": Casimir check failed"};
        }
        return {true, "omega-hat = id on V(Lambda); commutes with e_i, f_i"};
    }));

    out.push_back(timed("C8 gauge equivalence preserves relations and dims", [&]() -> std::pair<bool, std::string> {
        for (const char* p : {"A1", "A1odd", "A2"}) {
            auto dm = cartan_preset(p);
            auto choice = default_sqrt_choice(dm);
            HWModule hw = build_suite_module(p, 4);
            auto lift = lift_tilde(preset_uqsg(dm), dm, choice);
            HWModule hf = to_theta_family(hw, lift);
            HWModule hb = gauge_transform(hf, preset_theta_p("boldU", dm, choice));
            HWModule hk = gauge_transform(hb, preset_theta_p("BKM", dm, choice));
            HWModule ha = gauge_transform(hb, preset_theta_p("boldU", dm, pi_sqrt_choice(dm)));
            if (!check_EF(hb) || !check_EF(hk) || !check_EF(ha))
                return {false, std::string(p) + ": transported relation suite fails"};
            for (const ZVec& b : hw.betas)
                if (hw.dim_at(b) != hb.dim_at(b) || hb.dim_at(b) != hk.dim_at(b) ||
                    hb.dim_at(b) != ha.dim_at(b))
                    return {false, std::string(p) + ": dimensions changed"};
        }
        return {true, "Uqsg-lift <-> boldU <-> BKM transports pass the target suites"};
    }));

    out.push_back(timed("C9 quiver Hecke rewriter, 10^4 fuzz, < 5 min", [&]() -> std::pair<bool, std::string> {
        auto t0 = Clock::now();
        for (const char* qp : {"A2", "C6"}) {
            for (size_t n : {1u, 2u, 3u}) {
                QHSContext ctx(qparams_preset(qp), n);
                if (!ctx.relations_close())
                    return {false, std::string(qp) + ": relations fail at n=" + std::to_string(n)};
            }
        }
        unsigned done = 0;
        uint64_t seed = 0xACCEPT;
        for (const char* qp : {"A2", "C6"}) {
            for (size_t n : {2u, 3u, 4u}) {
                QHSContext ctx(qparams_preset(qp), n);
                unsigned rounds = 10000u / 6u + (n == 4u ? 1u : 0u);
                if (!ctx.associativity_fuzz(rounds, seed++))
                    return {false, std::string(qp) + ": fuzz failed at n=" + std::to_string(n)};
                done += rounds;
            }
        }
        for (const char* qp : {"A2", "C6"}) {
            auto params = qparams_preset(qp);
            for (uint8_t i = 0; i < params.datum.rank; ++i)
                for (size_t n : {2u, 3u, 4u}) {
                    QHSContext ctx(params, n);
                    Perm w0(n);
                    for (size_t k = 0; k < n; ++k) w0[k] = static_cast<uint8_t>(n - 1 - k);
                    QHSElement ref = ctx.b_longest(i);
                    if (!(ctx.multiply(ref, ref) == ref))
                        return {false, std::string(qp) + ": b(i^n) not idempotent"};
                    for (const auto& word : ctx.all_reduced_words(w0))
                        if (!(ctx.b_word(word, i) == ref))
                            return {false, std::string(qp) + ": b(i^n) depends on the word"};
                }
        }
        double s = std::chrono::duration<double>(Clock::now() - t0).count();
        if (s >= 300.0) return {false, "too slow: " + std::to_string(s) + " s"};
        return {true, std::to_string(done) + " fuzz cases; relations and idempotents pass"};
    }));

    out.push_back(timed("C10 strong perfect basis + recognition controls", []() {
        return recognition_battery();
    }));

    out.push_back(timed("C11 nilpotency shadow", [&]() -> std::pair<bool, std::string> {
        for (const char* p : {"A1", "A1odd", "A2", "B2"}) {
            auto dm = cartan_preset(p);
            ZVec lam = default_lambda(dm);
            VermaContext ctx(dm, preset_uqsg(dm), lam);
            unsigned cutoff = 6;
            for (const ZVec& beta : box(dm.rank, 2)) {
                for (size_t i = 0; i < dm.rank; ++i) {
                    long long bound = nilpotency_bound(dm, lam, beta, i);
                    for (long long k = bound;; ++k) {
                        ZVec b = beta;
                        b[i] += k;
                        if (zvec_height(b) > cutoff) break;
                        if (ctx.irr_weight_dim(b) != 0)
                            return {false, std::string(p) + ": nonzero beyond the bound"};
                    }
                }
            }
        }
        return {true, "dims vanish beyond the computed bound within the cutoff"};
    }));

    return out;
}

Json results_to_json(const std::vector<CheckResult>& results) {
    Json arr = Json::array();
    bool all = true;
    for (const auto& r : results) {
        Json j;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["detail"] = r.detail;
        j["seconds"] = r.seconds;
        arr.push_back(j);
        all = all && r.pass;
    }
    Json out;
    out["pass"] = all;
    out["checks"] = arr;
    return out;
}

}  // namespace qkms
