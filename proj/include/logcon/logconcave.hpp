#pragma once

// Log-concavity certification for sequences and pmfs.
//
// A nonnegative sequence is log-concave when a_k^2 >= a_{k-1} a_{k+1} for
// all k and the support has no internal zeros.  Ultra mode first multiplies
// mass k by k!; scaled mode by a caller-supplied positive factor.
//
// Exact inputs always get a decisive verdict.  Float inputs fail only when
// a violation exceeds the propagated error bound, pass only when every
// margin clears it, and are inconclusive otherwise.

#include "logcon/errors.hpp"
#include "logcon/numeric.hpp"
#include "logcon/pmf.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace logcon {

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

struct LogConcavityReport {
    Verdict verdict = Verdict::Pass;
    std::optional<long> first_violation;   // absolute index k
    double min_margin = 0.0;               // smallest a_k^2 - a_{k-1} a_{k+1}
    std::optional<long> internal_zero;     // absolute index of a zero inside support
};

enum class LcMode { Plain, Ultra };

namespace detail {

template <typename T>
LogConcavityReport check_sequence(const std::vector<T>& a, long offset, double rel_err) {
    LogConcavityReport rep;
    long n = static_cast<long>(a.size());
    long first = -1, last = -1;
    for (long i = 0; i < n; ++i) {
        if (a[i] > T(0)) { if (first < 0) first = i; last = i; }
        if (a[i] < T(0)) throw DomainError("check_logconcave: negative mass");
    }
    if (first < 0 || first == last) {
        rep.min_margin = (first < 0) ? 0.0 : to_double(a[first] * a[first]);
        return rep;  // empty or single-point support: vacuous pass
    }
    for (long i = first + 1; i < last; ++i) {
        if (a[i] == T(0)) {
            rep.verdict = Verdict::Fail;
            rep.internal_zero = offset + i;
            rep.first_violation = offset + i;
            return rep;
        }
    }
    // Only interior indices (both neighbors inside the support) carry a
    // nontrivial constraint; boundary margins are p(k)^2 >= 0 by sign.
    bool any_inconclusive = false;
    bool have_min = false;
    T min_margin(0);
    if (first + 1 > last - 1) min_margin = a[first] * a[first];
    for (long i = first + 1; i <= last - 1; ++i) {
        T left = a[i - 1];
        T right = a[i + 1];
        T sq = a[i] * a[i];
        T cross = left * right;
        T margin = sq - cross;
        if (!have_min || margin < min_margin) { min_margin = margin; have_min = true; }
        if (rel_err == 0.0) {
            if (margin < T(0) && rep.verdict != Verdict::Fail) {
                rep.verdict = Verdict::Fail;
                rep.first_violation = offset + i;
            }
        } else {
            // forward bound: each product carries <= (2*rel_err + rel_err^2)
            // relative error, plus a crumb for the subtraction itself
            T err = (sq + cross) * T(2.0 * rel_err + rel_err * rel_err + 1e-70);
            if (margin < -err) {
                if (rep.verdict != Verdict::Fail) {
                    rep.verdict = Verdict::Fail;
                    rep.first_violation = offset + i;
                }
            } else if (margin < err) {
                any_inconclusive = true;
            }
        }
    }
    if (have_min) rep.min_margin = to_double(min_margin);
    if (rep.verdict != Verdict::Fail && any_inconclusive)
        rep.verdict = Verdict::Inconclusive;
    return rep;
}

} // namespace detail

// Scaled check: sequence a_k * scale(k) with scale > 0 on the window.
template <typename T>
LogConcavityReport check_logconcave_scaled(const Pmf<T>& p,
                                           const std::function<T(long)>& scale) {
    std::vector<T> a;
    a.reserve(p.masses.size());
    for (std::size_t i = 0; i < p.masses.size(); ++i) {
        long k = p.offset + static_cast<long>(i);
        T s = scale(k);
        if (s <= T(0)) throw DomainError("check_logconcave_scaled: scale must be positive");
        a.push_back(p.masses[i] * s);
    }
    return detail::check_sequence(a, p.offset, p.rel_err);
}

template <typename T>
LogConcavityReport check_logconcave(const Pmf<T>& p, LcMode mode = LcMode::Plain) {
    if (mode == LcMode::Plain)
        return detail::check_sequence(p.masses, p.offset, p.rel_err);
    if (p.offset < 0)
        throw DomainError("check_logconcave: ultra mode needs support in N");
    std::vector<T> a;
    a.reserve(p.masses.size());
    for (std::size_t i = 0; i < p.masses.size(); ++i) {
        long k = p.offset + static_cast<long>(i);
        a.push_back(p.masses[i] * T(factorial(static_cast<unsigned long>(k))));
    }
    return detail::check_sequence(a, p.offset, p.rel_err);
}

// raw sequences (count tables, test vectors)
template <typename T>
LogConcavityReport check_logconcave_sequence(const std::vector<T>& a, long offset = 0) {
    return detail::check_sequence(a, offset, 0.0);
}

// Empirical counts: largest violation in multinomial-sigma units (0 when the
// empirical sequence is already log-concave).  Delta method with multinomial
// covariance on (p_{k-1}, p_k, p_{k+1}).
inline double empirical_logconcavity_max_sigma(const std::vector<long long>& counts) {
    long n = static_cast<long>(counts.size());
    long long N = 0;
    for (long long c : counts) N += c;
    if (N == 0) return 0.0;
    long first = -1, last = -1;
    for (long i = 0; i < n; ++i)
        if (counts[i] > 0) { if (first < 0) first = i; last = i; }
    double worst = 0.0;
    for (long i = first; i <= last; ++i) {
        double pk = static_cast<double>(counts[i]) / N;
        double pl = (i > 0) ? static_cast<double>(counts[i - 1]) / N : 0.0;
        double pr = (i + 1 < n) ? static_cast<double>(counts[i + 1]) / N : 0.0;
        double m = pk * pk - pl * pr;
        if (m >= 0) continue;
        // gradient of m wrt (pl, pk, pr)
        double g[3] = {-pr, 2 * pk, -pl};
        double p[3] = {pl, pk, pr};
        double var = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double cov = (a == b) ? p[a] * (1 - p[a]) : -p[a] * p[b];
                var += g[a] * g[b] * cov / static_cast<double>(N);
            }
        if (var <= 0) return 1e300;
        double sig = (-m) / std::sqrt(var);
        if (sig > worst) worst = sig;
    }
    return worst;
}

} // namespace logcon
