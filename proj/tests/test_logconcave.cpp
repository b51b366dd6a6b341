#include <catch2/catch_amalgamated.hpp>

#include "logcon/logconcave.hpp"
#include "logcon/rng.hpp"

using namespace logcon;

namespace {

RatPmf make_rat_pmf(std::vector<Rat> masses, long offset = 0) {
    RatPmf p;
    p.offset = offset;
    p.masses = std::move(masses);
    p.exact = true;
    return p;
}

} // namespace

TEST_CASE("plain mode anchors") {
    auto pass = check_logconcave(make_rat_pmf({Rat(2), Rat(3), Rat(2)}));
    REQUIRE(pass.verdict == Verdict::Pass);
    REQUIRE(pass.min_margin == Catch::Approx(5.0));  // 9 - 4 at the center

    auto fail = check_logconcave(make_rat_pmf({Rat(1), Rat(1), Rat(2)}));
    REQUIRE(fail.verdict == Verdict::Fail);
    REQUIRE(fail.first_violation.value() == 1);

    auto zero = check_logconcave(make_rat_pmf({Rat(1), Rat(0), Rat(1)}));
    REQUIRE(zero.verdict == Verdict::Fail);
    REQUIRE(zero.internal_zero.value() == 1);
}

TEST_CASE("offsets are respected") {
    auto rep = check_logconcave(make_rat_pmf({Rat(1), Rat(1), Rat(2)}, 10));
    REQUIRE(rep.verdict == Verdict::Fail);
    REQUIRE(rep.first_violation.value() == 11);
}

TEST_CASE("degenerate supports pass") {
    REQUIRE(check_logconcave(make_rat_pmf({Rat(5)})).verdict == Verdict::Pass);
    REQUIRE(check_logconcave(make_rat_pmf({Rat(0), Rat(7), Rat(0)})).verdict == Verdict::Pass);
}

TEST_CASE("ultra mode: poisson is the equality case") {
    // masses proportional to alpha^k / k!; k! * mass is geometric, margins 0
    RatPmf p;
    p.offset = 0;
    p.exact = true;
    Rat alpha(3, 2);
    Rat term(1);
    for (int k = 0; k <= 12; ++k) {
        p.masses.push_back(term);
        term = term * alpha / Rat(k + 1);
    }
    auto plain = check_logconcave(p, LcMode::Plain);
    REQUIRE(plain.verdict == Verdict::Pass);
    auto ultra = check_logconcave(p, LcMode::Ultra);
    REQUIRE(ultra.verdict == Verdict::Pass);
    REQUIRE(ultra.min_margin == Catch::Approx(0.0));
}

TEST_CASE("scaled mode") {
    // geometric masses are log-concave; scaling by 1/k! (the inverse-ultra
    // direction) makes the ratio increase, which stays log-concave, while
    // scaling by k!^2 of an ultra-boundary case breaks it
    RatPmf geo = make_rat_pmf({Rat(8), Rat(4), Rat(2), Rat(1)});
    auto rep = check_logconcave_scaled<Rat>(geo, [](long k) {
        return Rat(1) / Rat(factorial(static_cast<unsigned long>(k)));
    });
    REQUIRE(rep.verdict == Verdict::Pass);

    RatPmf pois;
    pois.offset = 0;
    pois.exact = true;
    Rat term(1);
    for (int k = 0; k <= 8; ++k) {
        pois.masses.push_back(term);
        term = term / Rat(k + 1);  // alpha = 1
    }
    auto rep2 = check_logconcave_scaled<Rat>(pois, [](long k) {
        Int f = factorial(static_cast<unsigned long>(k));
        return Rat(f * f);
    });
    REQUIRE(rep2.verdict == Verdict::Fail);

    REQUIRE_THROWS_AS(check_logconcave_scaled<Rat>(geo, [](long) { return Rat(0); }),
                      DomainError);
}

TEST_CASE("negative masses rejected") {
    REQUIRE_THROWS_AS(check_logconcave(make_rat_pmf({Rat(1), Rat(-1)})), DomainError);
}

TEST_CASE("float path: three-valued verdicts") {
    RealPmf p;
    p.offset = 0;
    p.rel_err = 1e-30;
    p.masses = {Real(1), Real(1), Real(1)};  // margins exactly 0 numerically
    auto rep = check_logconcave(p);
    REQUIRE(rep.verdict == Verdict::Inconclusive);

    p.masses = {Real(1), Real(2), Real(1)};
    REQUIRE(check_logconcave(p).verdict == Verdict::Pass);

    p.masses = {Real(1), Real(1), Real(2)};
    auto bad = check_logconcave(p);
    REQUIRE(bad.verdict == Verdict::Fail);
    REQUIRE(bad.first_violation.value() == 1);

    // violation smaller than the error bound: not a certified failure
    p.rel_err = 1e-2;
    p.masses = {Real(1), Real(1), Real("1.000001")};
    REQUIRE(check_logconcave(p).verdict == Verdict::Inconclusive);
}

TEST_CASE("property: products of adjacent-pair convolutions stay log-concave") {
    // random log-concave sequences built as repeated convolutions of short
    // log-concave blocks; convolution preserves log-concavity on Z
    SplitMix64 rng(20240811ULL);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rat> a = {Rat(1)};
        int blocks = 2 + static_cast<int>(rng.next() % 3);
        for (int b = 0; b < blocks; ++b) {
            long u = 1 + static_cast<long>(rng.next() % 5);
            long v = 1 + static_cast<long>(rng.next() % 5);
            // block (u, v) or (u, v, u') chosen log-concave by construction
            std::vector<Rat> blk = {Rat(u), Rat(u + v), Rat(u)};
            std::vector<Rat> c(a.size() + blk.size() - 1, Rat(0));
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t j = 0; j < blk.size(); ++j) c[i + j] += a[i] * blk[j];
            a = std::move(c);
        }
        REQUIRE(check_logconcave_sequence(a).verdict == Verdict::Pass);
    }
}

TEST_CASE("property: planted violations are found at the right index") {
    SplitMix64 rng(77ULL);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 6 + static_cast<int>(rng.next() % 6);
        std::vector<Rat> a(n);
        // strictly log-concave ridge
        for (int i = 0; i < n; ++i) {
            long d = std::min(i, n - 1 - i);
            a[i] = Rat(Int(1) << (4 * d));
        }
        int where = 2 + static_cast<int>(rng.next() % (n - 4));
        a[where] = a[where] / Rat(1000000);  // dent it
        auto rep = check_logconcave_sequence(a);
        REQUIRE(rep.verdict == Verdict::Fail);
        REQUIRE(rep.first_violation.value() == where);
    }
}

TEST_CASE("empirical sigma utility") {
    // perfectly geometric counts: no violation
    REQUIRE(empirical_logconcavity_max_sigma({1600, 800, 400, 200}) == 0.0);
    // a gross dent far beyond 3 sigma
    REQUIRE(empirical_logconcavity_max_sigma({100000, 10, 100000}) > 3.0);
}
