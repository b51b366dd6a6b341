#include <catch2/catch_amalgamated.hpp>

#include "logcon/ensembles.hpp"

using namespace logcon;

TEST_CASE("spec validation enforces parameter ranges") {
    REQUIRE_THROWS_AS(meixner_ensemble(3, 2, Rat(1, 2)), DomainError);   // m < n
    REQUIRE_THROWS_AS(meixner_ensemble(2, 2, Rat(1)), DomainError);      // q = 1
    REQUIRE_THROWS_AS(charlier_ensemble(1, Rat(0)), DomainError);
    REQUIRE_THROWS_AS(krawtchouk_ensemble(4, 3, Rat(1, 2)), DomainError);  // K < n
    REQUIRE_THROWS_AS(hahn_ensemble(3, 2), DomainError);                   // a < n
    EnsembleSpec bad = hahn_ensemble(2, 3);
    std::get<HahnWeights>(bad.weights).K = 7;  // breaks K = a + n - 1
    REQUIRE_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("ensemble_weight anchors") {
    auto mx = meixner_ensemble(2, 2, Rat(1, 2));
    REQUIRE(ensemble_weight_exact(mx, {0, 1}) == Rat(1, 2));

    auto ch = charlier_ensemble(1, Rat(3, 2));
    for (long x : {0L, 1L, 2L, 5L, 9L}) {
        double want = std::exp(-1.5) * std::pow(1.5, static_cast<double>(x)) /
                      std::tgamma(static_cast<double>(x + 1));
        REQUIRE(to_double(ensemble_weight(ch, {x})) == Catch::Approx(want).epsilon(1e-12));
    }

    REQUIRE_THROWS_AS(ensemble_weight(mx, {-1, 2}), DomainError);  // below support
    REQUIRE_THROWS_AS(ensemble_weight(mx, {1, 1}), DomainError);   // not increasing
    REQUIRE_THROWS_AS(ensemble_weight(mx, {2, 1}), DomainError);
}

TEST_CASE("single-particle marginals recover the classical laws") {
    // Charlier n=1 is Poisson(alpha)
    auto pois = compute_marginals<Rat>(charlier_ensemble(1, Rat(1)), {});
    const auto& p = pois.marginals[0];
    for (long k = 0; k <= 8; ++k) {
        double want = std::exp(-1.0) / std::tgamma(static_cast<double>(k + 1));
        REQUIRE(to_double(p.at(k)) == Catch::Approx(want).epsilon(1e-11));
    }
    REQUIRE(p.residual < 1e-12);

    // Krawtchouk n=1 is Binomial(K, p), exact with zero residual
    auto kr = compute_marginals<Rat>(krawtchouk_ensemble(1, 10, Rat(1, 3)), {});
    const auto& b = kr.marginals[0];
    REQUIRE(b.residual == 0.0);
    for (long k = 0; k <= 10; ++k) {
        Rat want = Rat(binomial(10ul, static_cast<unsigned long>(k))) *
                   rat_pow(Rat(1, 3), k) * rat_pow(Rat(2, 3), 10 - k);
        REQUIRE(b.at(k) == want);
    }
}

TEST_CASE("meixner n=2 anchor: Z = 8 and P(h2 = 1) = 1/16") {
    TruncationPolicy tp;
    tp.eps = 1e-13;
    auto ms = compute_marginals<Rat>(meixner_ensemble(2, 2, Rat(1, 2)), tp);
    REQUIRE(to_double(ms.z_window) == Catch::Approx(8.0).epsilon(1e-10));
    const auto& h2 = ms.marginals[1];
    REQUIRE(to_double(h2.at(1)) == Catch::Approx(1.0 / 16).epsilon(1e-10));
    // window normalization accounting: sum(masses) + residual == 1
    Rat total = h2.window_total();
    REQUIRE(to_double(total) + h2.residual == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(to_double(total) <= 1.0);
}

TEST_CASE("named families are log-concave; charlier and krawtchouk are ULC") {
    TruncationPolicy tp;
    tp.eps = 1e-10;
    std::vector<EnsembleSpec> specs = {
        meixner_ensemble(3, 3, Rat(1, 2)),
        meixner_ensemble(2, 4, Rat(1, 3)),
        charlier_ensemble(3, Rat(2)),
        krawtchouk_ensemble(3, 8, Rat(1, 3)),
        hahn_ensemble(2, 3),
    };
    for (const auto& spec : specs) {
        auto ms = compute_marginals<Rat>(spec, tp);
        for (const auto& m : ms.marginals) {
            auto rep = check_logconcave(m);
            INFO("family index " << spec.weights.index() << " n=" << spec.n);
            REQUIRE(rep.verdict == Verdict::Pass);
        }
    }
    for (const auto& spec : {charlier_ensemble(2, Rat(1)), krawtchouk_ensemble(2, 6, Rat(2, 5))}) {
        auto ms = compute_marginals<Rat>(spec, tp);
        for (const auto& m : ms.marginals)
            REQUIRE(check_logconcave(m, LcMode::Ultra).verdict == Verdict::Pass);
    }
}

TEST_CASE("site-dependent weights and pair-dependent interactions") {
    // log-concave custom tables, pair-dependent exact interaction
    CustomWeights cw;
    cw.lo = 0;
    cw.site_tables = {
        {Rat(1), Rat(3), Rat(3), Rat(1)},
        {Rat(2), Rat(4), Rat(4), Rat(2)},
        {Rat(1), Rat(2), Rat(2), Rat(1)},
    };
    CustomInteraction ci;
    ci.q = [](int i, int j, long d) {
        return Rat(d * d + (j - i)) ;  // log-concave in d for each pair
    };
    EnsembleSpec spec{3, cw, ci, 0};
    spec.validate();
    auto ms = compute_marginals<Rat>(spec, {});
    REQUIRE(ms.tail_bound == 0.0);
    for (const auto& m : ms.marginals)
        REQUIRE(check_logconcave(m).verdict == Verdict::Pass);
}

TEST_CASE("qtheta") {
    for (long x = 1; x <= 10; ++x) {
        REQUIRE(qtheta(static_cast<double>(x), 1.0) ==
                Catch::Approx(static_cast<double>(x * x)).epsilon(1e-12));
        REQUIRE(qtheta(static_cast<double>(x), 0.5) ==
                Catch::Approx(static_cast<double>(x)).epsilon(1e-12));
    }
    REQUIRE(qtheta(3.0, 2.0) == Catch::Approx(72.0).epsilon(1e-12));
    REQUIRE_THROWS_AS(qtheta(0.5, 2.0), DomainError);   // x <= theta - 1
    REQUIRE_THROWS_AS(qtheta(-1.0, 0.5), DomainError);  // x <= 0
    REQUIRE_THROWS_AS(qtheta(1.0, 0.0), DomainError);
}

TEST_CASE("discrete beta gas") {
    TruncationPolicy tp;
    tp.eps = 1e-11;

    // n = 1: no interaction, pmf is proportional to w
    auto p1 = discrete_beta_lambda1_pmf(1, std::numeric_limits<double>::infinity(), 0.7,
                                        geometric_beta_weight(0.5), tp);
    for (long k = 0; k <= 10; ++k)
        REQUIRE(to_double(p1.at(k)) ==
                Catch::Approx(0.5 * std::pow(0.5, static_cast<double>(k))).epsilon(1e-9));

    // theta = 1 reduces to the geometric-weight squared-Vandermonde ensemble
    auto pb = discrete_beta_lambda1_pmf(2, std::numeric_limits<double>::infinity(), 1.0,
                                        geometric_beta_weight(0.5), tp);
    EnsembleSpec geom{2, GeometricPowerWeights{Rat(1, 2)}, PowerInteraction{2}, 0};
    auto ms = compute_marginals<Rat>(geom, tp);
    const auto& h2 = ms.marginals[1];
    for (long k = 0; k <= 12; ++k)
        REQUIRE(to_double(pb.at(k)) == Catch::Approx(to_double(h2.at(k + 1))).margin(1e-9));

    // fractional theta keeps log-concavity (claim instance)
    auto ph = discrete_beta_lambda1_pmf(2, std::numeric_limits<double>::infinity(), 0.5,
                                        geometric_beta_weight(0.5), tp);
    REQUIRE(check_logconcave(ph).verdict == Verdict::Pass);
}

TEST_CASE("poisson concentration bounds") {
    // Poisson(2): boundary case, variance == mean up to truncation
    auto pois = compute_marginals<Rat>(charlier_ensemble(1, Rat(2)), {});
    auto r1 = poisson_concentration_check(pois.marginals[0]);
    REQUIRE(r1.variance_ok);
    REQUIRE(r1.upper_ok);
    REQUIRE(r1.lower_ok);
    REQUIRE(r1.variance == Catch::Approx(r1.mean).margin(1e-8));

    // Binomial(10, 1/3): variance 20/9 below mean 10/3
    auto bin = compute_marginals<Rat>(krawtchouk_ensemble(1, 10, Rat(1, 3)), {});
    auto r2 = poisson_concentration_check(bin.marginals[0]);
    REQUIRE(r2.variance_ok);
    REQUIRE(r2.upper_ok);
    REQUIRE(r2.lower_ok);
    REQUIRE(r2.mean == Catch::Approx(10.0 / 3));
    REQUIRE(r2.variance == Catch::Approx(20.0 / 9));

    // Charlier(1) two-particle marginal
    auto ch = compute_marginals<Rat>(charlier_ensemble(2, Rat(1)), {});
    auto r3 = poisson_concentration_check(ch.marginals[1]);
    REQUIRE(r3.variance_ok);
    REQUIRE(r3.upper_ok);
    REQUIRE(r3.lower_ok);
}

TEST_CASE("marginal index bounds") {
    auto spec = charlier_ensemble(2, Rat(1));
    REQUIRE_THROWS_AS(marginal_pmf(spec, 0), DomainError);
    REQUIRE_THROWS_AS(marginal_pmf(spec, 3), DomainError);
}

TEST_CASE("budget errors are resource errors") {
    TruncationPolicy tp;
    tp.max_tuples = 10;
    auto spec = meixner_ensemble(3, 3, Rat(1, 2));
    REQUIRE_THROWS_AS(compute_marginals<Rat>(spec, tp), ResourceError);
}
