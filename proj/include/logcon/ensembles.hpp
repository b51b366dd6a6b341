#pragma once

// Ordered discrete ensembles on strictly increasing integer tuples,
//   P(h) ~ prod_{i<j} Q_{ij}(h_j - h_i) * prod_j w_j(h_j),
// with the named weight families (Meixner, Charlier, Krawtchouk, Hahn,
// geometric), exact marginal pmfs by enumeration over a certified window,
// the proof-function builder feeding the HKS verifier, the Gamma-ratio
// interaction Q_theta, the ordered discrete beta gas, and Poisson-type
// concentration checks.
//
// Exactness split: rational weights with integer-power (or exact custom)
// interactions run end-to-end in Rat; everything else runs in 256-bit Real.
// Infinite-support windows grow until an explicit tail certificate drops
// below the requested epsilon; reported masses are normalized by
// Z_window + tail_bound so that sum(masses) + residual == 1 and window
// ratios are exact.

#include "logcon/errors.hpp"
#include "logcon/hks.hpp"
#include "logcon/logconcave.hpp"
#include "logcon/parallel.hpp"
#include "logcon/pmf.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace logcon {

// ---------------------------------------------------------------------------
// weight families
// ---------------------------------------------------------------------------

struct MeixnerWeights {            // w(x) = binom(x + m - n, x) q^x on N
    long m = 1;
    Rat q = Rat(1, 2);
};
struct CharlierWeights {           // w(x) = e^{-alpha} alpha^x / x! on N
    Rat alpha = Rat(1);
};
struct KrawtchoukWeights {         // w(x) = binom(K, x) p^x (1-p)^{K-x} on {0..K}
    long K = 1;
    Rat p = Rat(1, 2);
};
struct HahnWeights {               // w(x) = binom(x+a-n, x) binom(K+a-n-x, K-x) on {0..K}
    long a = 1;
    long K = 1;                    // the convention K = a + n - 1 is enforced
};
struct GeometricPowerWeights {     // w(x) = q^x on N
    Rat q = Rat(1, 2);
};
struct CustomWeights {             // per-site dense tables on {lo, ..., lo+len-1}
    long lo = 0;
    std::vector<std::vector<Rat>> site_tables;  // one table per site
};

using WeightFamily = std::variant<MeixnerWeights, CharlierWeights, KrawtchoukWeights,
                                  HahnWeights, GeometricPowerWeights, CustomWeights>;

// interactions: Q(d) on gaps d >= 1
struct PowerInteraction { int exponent = 2; };        // Q(d) = d^e, exact
struct RealPowerInteraction { double beta = 2.0; };   // Q(d) = d^beta
struct QThetaInteraction { double theta = 1.0; };     // Gamma-ratio form
struct CustomInteraction {                            // exact, pair-dependent
    std::function<Rat(int i, int j, long d)> q;
};

using Interaction =
    std::variant<PowerInteraction, RealPowerInteraction, QThetaInteraction, CustomInteraction>;

// Q_theta(x) = Gamma(x+1) Gamma(x+theta) / (Gamma(x+1-theta) Gamma(x)),
// defined for x > max(0, theta - 1)
inline Real qtheta(const Real& x, const Real& theta) {
    if (!(theta > 0)) throw DomainError("qtheta: theta must be positive");
    if (!(x > 0) || !(x + 1 > theta))
        throw DomainError("qtheta: requires x > max(0, theta-1)");
    return exp(lgamma(x + 1) + lgamma(x + theta) - lgamma(x + 1 - theta) - lgamma(x));
}

inline double qtheta(double x, double theta) {
    return to_double(qtheta(Real(x), Real(theta)));
}

struct TruncationPolicy {
    double eps = 1e-12;                       // target residual
    unsigned long long max_tuples = 400000000ULL;  // enumeration budget
    long max_window = 4000;
    unsigned threads = 0;                     // 0 = default
};

struct EnsembleSpec {
    int n = 1;
    WeightFamily weights;
    Interaction interaction = PowerInteraction{2};
    long support_lo = 0;

    void validate() const {
        if (n < 1) throw DomainError("EnsembleSpec: n must be >= 1");
        std::visit([&](const auto& w) {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, MeixnerWeights>) {
                if (w.m < n) throw DomainError("Meixner: requires m >= n");
                if (!(w.q > 0 && w.q < 1)) throw DomainError("Meixner: q in (0,1)");
            } else if constexpr (std::is_same_v<W, CharlierWeights>) {
                if (!(w.alpha > 0)) throw DomainError("Charlier: alpha > 0");
            } else if constexpr (std::is_same_v<W, KrawtchoukWeights>) {
                if (w.K < n) throw DomainError("Krawtchouk: requires K >= n");
                if (!(w.p > 0 && w.p < 1)) throw DomainError("Krawtchouk: p in (0,1)");
            } else if constexpr (std::is_same_v<W, HahnWeights>) {
                if (w.a < n) throw DomainError("Hahn: requires a >= n");
                if (w.K != w.a + n - 1) throw DomainError("Hahn: requires K = a + n - 1");
            } else if constexpr (std::is_same_v<W, GeometricPowerWeights>) {
                if (!(w.q > 0 && w.q < 1)) throw DomainError("GeometricPower: q in (0,1)");
            } else if constexpr (std::is_same_v<W, CustomWeights>) {
                if (w.site_tables.size() != static_cast<std::size_t>(n))
                    throw DomainError("CustomWeights: need one table per site");
                for (const auto& t : w.site_tables) {
                    if (t.empty()) throw DomainError("CustomWeights: empty table");
                    for (const Rat& v : t)
                        if (v < 0) throw DomainError("CustomWeights: negative weight");
                }
            }
        }, weights);
        std::visit([&](const auto& q) {
            using Q = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<Q, PowerInteraction>) {
                if (q.exponent < 0) throw DomainError("PowerInteraction: exponent >= 0");
            } else if constexpr (std::is_same_v<Q, RealPowerInteraction>) {
                if (!(q.beta > 0)) throw DomainError("RealPowerInteraction: beta > 0");
            } else if constexpr (std::is_same_v<Q, QThetaInteraction>) {
                if (!(q.theta > 0)) throw DomainError("QThetaInteraction: theta > 0");
            } else if constexpr (std::is_same_v<Q, CustomInteraction>) {
                if (!q.q) throw DomainError("CustomInteraction: missing function");
            }
        }, interaction);
    }

    // hard upper support bound, when the family has one
    std::optional<long> support_hi() const {
        if (const auto* kr = std::get_if<KrawtchoukWeights>(&weights)) return kr->K;
        if (const auto* ha = std::get_if<HahnWeights>(&weights)) return ha->K;
        if (const auto* cu = std::get_if<CustomWeights>(&weights)) {
            std::size_t len = cu->site_tables.front().size();
            for (const auto& t : cu->site_tables) len = std::max(len, t.size());
            return cu->lo + static_cast<long>(len) - 1;
        }
        return std::nullopt;
    }

    bool exact_capable() const {
        return std::holds_alternative<PowerInteraction>(interaction) ||
               std::holds_alternative<CustomInteraction>(interaction);
    }

    // Exact weight with family-constant positive prefactors dropped
    // (Charlier's e^{-alpha} cancels in every pmf and every margin ratio).
    Rat weight_core(int site, long x) const {
        if (x < support_lo) return Rat(0);
        return std::visit([&](const auto& w) -> Rat {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, MeixnerWeights>) {
                return Rat(binomial(Int(x + w.m - n), static_cast<unsigned long>(x))) *
                       rat_pow(w.q, x);
            } else if constexpr (std::is_same_v<W, CharlierWeights>) {
                return rat_pow(w.alpha, x) / Rat(factorial(static_cast<unsigned long>(x)));
            } else if constexpr (std::is_same_v<W, KrawtchoukWeights>) {
                if (x > w.K) return Rat(0);
                return Rat(binomial(static_cast<unsigned long>(w.K), static_cast<unsigned long>(x))) *
                       rat_pow(w.p, x) * rat_pow(Rat(1) - w.p, w.K - x);
            } else if constexpr (std::is_same_v<W, HahnWeights>) {
                if (x > w.K) return Rat(0);
                return Rat(binomial(Int(x + w.a - n), static_cast<unsigned long>(x)) *
                           binomial(Int(w.K + w.a - n - x), static_cast<unsigned long>(w.K - x)));
            } else if constexpr (std::is_same_v<W, GeometricPowerWeights>) {
                return rat_pow(w.q, x);
            } else {
                long i = x - w.lo;
                const auto& t = w.site_tables[static_cast<std::size_t>(site - 1)];
                if (i < 0 || i >= static_cast<long>(t.size())) return Rat(0);
                return t[static_cast<std::size_t>(i)];
            }
        }, weights);
    }

    // log of the dropped per-site prefactor (0 except Charlier)
    double log_prefactor_per_site() const {
        if (const auto* ch = std::get_if<CharlierWeights>(&weights))
            return -to_double(ch->alpha);
        return 0.0;
    }

    Rat interaction_exact(int i, int j, long d) const {
        if (const auto* pw = std::get_if<PowerInteraction>(&interaction))
            return Rat(int_pow(Int(d), static_cast<unsigned long>(pw->exponent)));
        if (const auto* cu = std::get_if<CustomInteraction>(&interaction)) {
            Rat v = cu->q(i, j, d);
            if (v < 0) throw DomainError("CustomInteraction: negative value");
            return v;
        }
        throw DomainError("interaction_exact: interaction is not exact-capable");
    }

    Real interaction_real(int i, int j, long d) const {
        if (const auto* pw = std::get_if<PowerInteraction>(&interaction))
            return Real(int_pow(Int(d), static_cast<unsigned long>(pw->exponent)));
        if (const auto* rp = std::get_if<RealPowerInteraction>(&interaction))
            return pow(Real(d), Real(rp->beta));
        if (const auto* qt = std::get_if<QThetaInteraction>(&interaction))
            return qtheta(Real(d), Real(qt->theta));
        return Real(interaction_exact(i, j, d));
    }

    // (exponent, shift) with Q_{ij}(d) <= (d + shift)^exponent for d >= 1
    std::pair<double, double> interaction_degree() const {
        double pairs = 0.5 * n * (n - 1);
        if (const auto* pw = std::get_if<PowerInteraction>(&interaction))
            return {pairs * pw->exponent, 0.0};
        if (const auto* rp = std::get_if<RealPowerInteraction>(&interaction))
            return {pairs * rp->beta, 0.0};
        if (const auto* qt = std::get_if<QThetaInteraction>(&interaction))
            return {pairs * 2.0 * qt->theta, qt->theta};
        throw DomainError("interaction_degree: custom interactions need a finite window");
    }

    // double-precision log weight, used only inside tail certificates
    double log_weight_bound(long x) const {
        return std::visit([&](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, MeixnerWeights>) {
                double q = to_double(w.q);
                return std::lgamma(static_cast<double>(x + w.m - n + 1)) -
                       std::lgamma(static_cast<double>(x + 1)) -
                       std::lgamma(static_cast<double>(w.m - n + 1)) + x * std::log(q);
            } else if constexpr (std::is_same_v<W, CharlierWeights>) {
                double a = to_double(w.alpha);
                return x * std::log(a) - std::lgamma(static_cast<double>(x + 1));
            } else if constexpr (std::is_same_v<W, GeometricPowerWeights>) {
                return x * std::log(to_double(w.q));
            } else {
                throw DomainError("log_weight_bound: family has a hard window");
            }
        }, weights);
    }

    // certified decreasing upper bound on w(x+1)/w(x) for adaptive tails
    double weight_ratio_bound(long x) const {
        return std::visit([&](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, MeixnerWeights>) {
                return to_double(w.q) * (static_cast<double>(x + 1 + w.m - n) / (x + 1)) *
                       (1 + 1e-12);
            } else if constexpr (std::is_same_v<W, CharlierWeights>) {
                return to_double(w.alpha) / (x + 1) * (1 + 1e-12);
            } else if constexpr (std::is_same_v<W, GeometricPowerWeights>) {
                return to_double(w.q) * (1 + 1e-12);
            } else {
                throw DomainError("weight_ratio_bound: family has a hard window");
            }
        }, weights);
    }
};

// named constructors
inline EnsembleSpec meixner_ensemble(int n, long m, Rat q) {
    EnsembleSpec s{n, MeixnerWeights{m, std::move(q)}, PowerInteraction{2}, 0};
    s.validate();
    return s;
}
inline EnsembleSpec charlier_ensemble(int n, Rat alpha) {
    EnsembleSpec s{n, CharlierWeights{std::move(alpha)}, PowerInteraction{2}, 0};
    s.validate();
    return s;
}
inline EnsembleSpec krawtchouk_ensemble(int n, long K, Rat p) {
    EnsembleSpec s{n, KrawtchoukWeights{K, std::move(p)}, PowerInteraction{2}, 0};
    s.validate();
    return s;
}
inline EnsembleSpec hahn_ensemble(int n, long a) {
    EnsembleSpec s{n, HahnWeights{a, a + n - 1}, PowerInteraction{2}, 0};
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// ensemble_weight
// ---------------------------------------------------------------------------

namespace detail {

inline void require_increasing_in_support(const EnsembleSpec& spec,
                                          const std::vector<long>& h) {
    if (static_cast<int>(h.size()) != spec.n)
        throw DomainError("ensemble_weight: tuple size != n");
    auto hi = spec.support_hi();
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] < spec.support_lo || (hi && h[i] > *hi))
            throw DomainError("ensemble_weight: coordinate outside support");
        if (i > 0 && h[i] <= h[i - 1])
            throw DomainError("ensemble_weight: tuple must be strictly increasing");
    }
}

} // namespace detail

// Exact unnormalized mass with constant prefactors dropped (see weight_core).
inline Rat ensemble_weight_exact(const EnsembleSpec& spec, const std::vector<long>& h) {
    spec.validate();
    detail::require_increasing_in_support(spec, h);
    if (!spec.exact_capable())
        throw DomainError("ensemble_weight_exact: interaction is not exact");
    Rat total(1);
    for (int j = 0; j < spec.n; ++j) {
        total *= spec.weight_core(j + 1, h[static_cast<std::size_t>(j)]);
        for (int i = 0; i < j; ++i)
            total *= spec.interaction_exact(i + 1, j + 1,
                                            h[static_cast<std::size_t>(j)] - h[static_cast<std::size_t>(i)]);
    }
    return total;
}

// Unnormalized mass exactly as the measure is written (prefactors included).
inline Real ensemble_weight(const EnsembleSpec& spec, const std::vector<long>& h) {
    spec.validate();
    detail::require_increasing_in_support(spec, h);
    Real total = exp(Real(spec.n * spec.log_prefactor_per_site()));
    for (int j = 0; j < spec.n; ++j) {
        total *= Real(spec.weight_core(j + 1, h[static_cast<std::size_t>(j)]));
        for (int i = 0; i < j; ++i)
            total *= spec.interaction_real(i + 1, j + 1,
                                           h[static_cast<std::size_t>(j)] - h[static_cast<std::size_t>(i)]);
    }
    return total;
}

// ---------------------------------------------------------------------------
// marginal pmfs by windowed enumeration
// ---------------------------------------------------------------------------

template <typename S>
struct MarginalSet {
    long window_lo = 0;
    long window_hi = 0;
    std::vector<std::vector<S>> unnorm;  // [i-1][v - window_lo] layer sums
    S z_window = S(0);
    double tail_bound = 0.0;             // unnormalized, same scale as z_window
    std::vector<Pmf<S>> marginals;       // filled by finalize()
};

namespace detail {

template <typename S>
S scalar_weight(const EnsembleSpec& spec, int site, long x) {
    if constexpr (std::is_same_v<S, Rat>) {
        return spec.weight_core(site, x);
    } else {
        return Real(spec.weight_core(site, x));
    }
}

template <typename S>
S scalar_interaction(const EnsembleSpec& spec, int i, int j, long d) {
    if constexpr (std::is_same_v<S, Rat>) {
        return spec.interaction_exact(i, j, d);
    } else {
        return spec.interaction_real(i, j, d);
    }
}

// Enumerates strictly increasing (n-1)-prefixes below a fixed top value and
// accumulates the closed-tuple mass into per-site tables.
template <typename S>
struct LayerWorker {
    const EnsembleSpec& spec;
    long window_lo;
    std::vector<std::vector<S>>& acc;  // [site-1][v - window_lo]
    unsigned long long visited = 0;

    void close_tuple(const std::vector<long>& h, const S& partial, long top) {
        S total = partial * scalar_weight<S>(spec, spec.n, top);
        for (std::size_t i = 0; i < h.size(); ++i)
            total *= scalar_interaction<S>(spec, static_cast<int>(i) + 1, spec.n, top - h[i]);
        for (std::size_t i = 0; i < h.size(); ++i)
            acc[i][static_cast<std::size_t>(h[i] - window_lo)] += total;
        acc[static_cast<std::size_t>(spec.n - 1)][static_cast<std::size_t>(top - window_lo)] += total;
        ++visited;
    }

    // site j fills next; x_j <= top - n + j keeps room for the sites above
    void extend(std::vector<long>& h, const S& partial, long top) {
        int j = static_cast<int>(h.size()) + 1;
        if (j == spec.n) {
            close_tuple(h, partial, top);
            return;
        }
        long cap = top - spec.n + j;
        for (long x = h.empty() ? window_lo : h.back() + 1; x <= cap; ++x) {
            S w = scalar_weight<S>(spec, j, x);
            if (w == S(0)) continue;
            S p2 = partial * w;
            for (std::size_t i = 0; i < h.size(); ++i)
                p2 *= scalar_interaction<S>(spec, static_cast<int>(i) + 1, j, x - h[i]);
            h.push_back(x);
            extend(h, p2, top);
            h.pop_back();
        }
    }
};

// upper bound on the unnormalized mass of all layers with h_n >= k0
inline double layer_tail_bound(const EnsembleSpec& spec, long k0, double log_wmax) {
    auto [deg, shift] = spec.interaction_degree();
    long lo = spec.support_lo;
    double nm1 = spec.n - 1;
    auto log_layer_cap = [&](long k) {
        double range = static_cast<double>(k - lo);
        double lc = nm1 * std::log(std::max(range, 1.0)) -
                    std::lgamma(nm1 + 1);               // choose(n-1) cap
        double lq = deg * std::log(range + shift + 1.0);  // interaction cap
        return lc + lq + nm1 * log_wmax + spec.log_weight_bound(k);
    };
    auto ratio = [&](long k) {
        double range = static_cast<double>(k - lo);
        double r = std::pow((range + 1.0) / range, nm1 + deg) * spec.weight_ratio_bound(k);
        return r;
    };
    double r0 = ratio(k0);
    if (!(r0 < 1.0)) return std::numeric_limits<double>::infinity();
    double first = std::exp(log_layer_cap(k0));
    return first / (1.0 - r0) * (1.0 + 1e-9);
}

// max over x of the double-log core weight (families are unimodal)
inline double log_weight_max(const EnsembleSpec& spec) {
    double best = -std::numeric_limits<double>::infinity();
    double prev = -std::numeric_limits<double>::infinity();
    long stale = 0;
    for (long x = spec.support_lo; x < spec.support_lo + 1000000; ++x) {
        double v = spec.log_weight_bound(x);
        if (v > best) best = v;
        if (v < prev) { if (++stale > 64 && v < best - 800) break; }
        else stale = 0;
        prev = v;
    }
    return best;
}

} // namespace detail

// All n marginals in one enumeration sweep.
template <typename S>
MarginalSet<S> compute_marginals(const EnsembleSpec& spec, const TruncationPolicy& trunc = {}) {
    spec.validate();
    if constexpr (std::is_same_v<S, Rat>) {
        if (!spec.exact_capable())
            throw DomainError("compute_marginals<Rat>: spec is not exact-capable");
    }
    const long lo = spec.support_lo;
    auto hard_hi = spec.support_hi();
    const int n = spec.n;

    MarginalSet<S> out;
    out.window_lo = lo;
    long cap_hi = hard_hi ? *hard_hi : lo + trunc.max_window;
    long width = cap_hi - lo + 1;
    if (width < n) throw DomainError("compute_marginals: support too small for n particles");
    out.unnorm.assign(static_cast<std::size_t>(n), {});
    for (auto& t : out.unnorm) t.assign(static_cast<std::size_t>(width), S(0));

    double log_wmax = hard_hi ? 0.0 : detail::log_weight_max(spec);
    unsigned long long visited_total = 0;

    // Work is split into a fixed number of chunks over the first coordinate,
    // merged in chunk order, so results are identical for any thread count.
    constexpr std::size_t kChunks = 16;

    long k_end = lo + n - 2;  // last finished layer (none yet)
    for (long k = lo + n - 1; k <= cap_hi; ++k) {
        long first_max = k - (n - 1);
        long first_count = (n == 1) ? 1 : (first_max - lo + 1);
        std::size_t chunks = std::min<std::size_t>(kChunks, static_cast<std::size_t>(first_count));
        long layer_width = k - lo + 1;
        auto run_chunk = [&](std::size_t ci) {
            std::vector<std::vector<S>> acc(static_cast<std::size_t>(n));
            for (auto& t : acc) t.assign(static_cast<std::size_t>(layer_width), S(0));
            detail::LayerWorker<S> worker{spec, lo, acc, 0};
            if (n == 1) {
                std::vector<long> h;
                worker.close_tuple(h, S(1), k);
            } else {
                long b0 = lo + static_cast<long>(ci * static_cast<std::size_t>(first_count) / chunks);
                long b1 = lo + static_cast<long>((ci + 1) * static_cast<std::size_t>(first_count) / chunks);
                std::vector<long> h(1);
                for (long first = b0; first < b1; ++first) {
                    S w = detail::scalar_weight<S>(spec, 1, first);
                    if (w == S(0)) continue;
                    h[0] = first;
                    worker.extend(h, w, k);
                }
            }
            return std::make_pair(std::move(acc), worker.visited);
        };
        bool parallel = n > 1 && (k - lo) >= 24;
        std::vector<std::pair<std::vector<std::vector<S>>, unsigned long long>> results;
        if (parallel) {
            results = parallel_map<std::pair<std::vector<std::vector<S>>, unsigned long long>>(
                chunks, run_chunk, trunc.threads);
        } else {
            results.reserve(chunks);
            for (std::size_t c = 0; c < chunks; ++c) results.push_back(run_chunk(c));
        }
        for (auto& [acc, vis] : results) {  // fixed merge order
            visited_total += vis;
            for (int i = 0; i < n; ++i)
                for (long v = 0; v < layer_width; ++v)
                    if (acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] != S(0))
                        out.unnorm[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] +=
                            acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
        }
        if (visited_total > trunc.max_tuples)
            throw ResourceError("compute_marginals: tuple budget exceeded at window " +
                                std::to_string(k - lo));
        k_end = k;

        if (!hard_hi && k >= lo + n + 4) {
            S z(0);
            for (long v = 0; v < width; ++v)
                z += out.unnorm[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(v)];
            double zd = to_double(z);
            double tail = detail::layer_tail_bound(spec, k + 1, log_wmax);
            if (tail < trunc.eps * zd) {
                out.tail_bound = tail;
                break;
            }
            if (k == cap_hi)
                throw ResourceError("compute_marginals: window cap reached before residual target");
        }
    }
    out.window_hi = k_end;
    long used = k_end - lo + 1;
    for (auto& t : out.unnorm) t.resize(static_cast<std::size_t>(used));

    for (long v = 0; v < used; ++v)
        out.z_window += out.unnorm[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(v)];

    // finalize pmfs: normalize by Z_window + tail so masses underestimate
    S z_up = out.z_window;
    if constexpr (std::is_same_v<S, Rat>) {
        z_up += rat_from_double(out.tail_bound);
    } else {
        z_up += Real(out.tail_bound);
    }
    double resid = out.tail_bound / to_double(z_up);
    for (int i = 0; i < n; ++i) {
        Pmf<S> p;
        p.offset = lo;
        p.masses = out.unnorm[static_cast<std::size_t>(i)];
        for (auto& m : p.masses) m /= z_up;
        p.residual = resid;
        p.exact = std::is_same_v<S, Rat>;
        p.rel_err = std::is_same_v<S, Rat> ? 0.0 : 1e-65;
        p.trim();
        out.marginals.push_back(std::move(p));
    }
    return out;
}

using AnyPmf = std::variant<RatPmf, RealPmf>;

// pmf of h_i (1-based, h_1 < ... < h_n); exact when the spec allows it
inline AnyPmf marginal_pmf(const EnsembleSpec& spec, int i, const TruncationPolicy& trunc = {}) {
    if (i < 1 || i > spec.n) throw DomainError("marginal_pmf: index out of range");
    if (spec.exact_capable()) {
        auto ms = compute_marginals<Rat>(spec, trunc);
        return ms.marginals[static_cast<std::size_t>(i - 1)];
    }
    auto ms = compute_marginals<Real>(spec, trunc);
    return ms.marginals[static_cast<std::size_t>(i - 1)];
}

inline LogConcavityReport check_logconcave_any(const AnyPmf& p, LcMode mode = LcMode::Plain) {
    return std::visit([&](const auto& pm) { return check_logconcave(pm, mode); }, p);
}

// ---------------------------------------------------------------------------
// proof functions for the HKS machine check
// ---------------------------------------------------------------------------

struct ProofFunctions {
    BoxTable<Rat> f;  // level set x_i = k-1
    BoxTable<Rat> g;  // level set x_i = k+1
    BoxTable<Rat> h;  // level set x_i = k (and h = k in the verifier)
};

// Dense tables of the unnormalized ensemble mass restricted to the level
// sets S_{k-1}, S_{k+1}, S_k inside box^n.
inline ProofFunctions build_proof_functions(const EnsembleSpec& spec, int i, long level,
                                            long box_lo, long box_hi) {
    spec.validate();
    if (!spec.exact_capable())
        throw DomainError("build_proof_functions: needs an exact-capable interaction");
    if (i < 1 || i > spec.n) throw DomainError("build_proof_functions: index out of range");
    long width = box_hi - box_lo + 1;
    if (width < spec.n) throw DomainError("build_proof_functions: box too small");
    double cells = std::pow(static_cast<double>(width), spec.n);
    if (cells > 6.0e7) throw ResourceError("build_proof_functions: box too large");

    std::vector<long> lo(static_cast<std::size_t>(spec.n), box_lo);
    std::vector<long> dims(static_cast<std::size_t>(spec.n), width);
    ProofFunctions out{BoxTable<Rat>(lo, dims), BoxTable<Rat>(lo, dims), BoxTable<Rat>(lo, dims)};

    std::vector<long> h;
    std::function<void(Rat)> rec = [&](Rat partial) {
        int j = static_cast<int>(h.size()) + 1;
        long from = h.empty() ? std::max(box_lo, spec.support_lo) : h.back() + 1;
        for (long x = from; x <= box_hi; ++x) {
            Rat w = spec.weight_core(j, x);
            if (w == 0) continue;
            Rat p2 = partial * w;
            for (std::size_t t = 0; t < h.size(); ++t)
                p2 *= spec.interaction_exact(static_cast<int>(t) + 1, j, x - h[t]);
            h.push_back(x);
            if (j == spec.n) {
                long xi = h[static_cast<std::size_t>(i - 1)];
                if (xi == level - 1) out.f.set(h, out.f.at(h) + p2);
                else if (xi == level) out.h.set(h, out.h.at(h) + p2);
                else if (xi == level + 1) out.g.set(h, out.g.at(h) + p2);
            } else {
                rec(p2);
            }
            h.pop_back();
        }
    };
    rec(Rat(1));
    return out;
}

// ---------------------------------------------------------------------------
// ordered discrete beta gas on weakly decreasing lambda
// ---------------------------------------------------------------------------

struct DiscreteBetaWeight {
    // w evaluated at real argument lambda_j + (n-j) theta
    std::function<Real(double)> w;
    // certified decreasing bound on w(x+1)/w(x); required when m is infinite
    std::function<double(double)> ratio_bound;
    double log_w_max = 0.0;  // upper bound on log w over the support
};

inline DiscreteBetaWeight geometric_beta_weight(double q) {
    if (!(q > 0 && q < 1)) throw DomainError("geometric_beta_weight: q in (0,1)");
    return DiscreteBetaWeight{
        [q](double x) { return exp(Real(x) * log(Real(q))); },
        [q](double) { return q * (1 + 1e-12); },
        0.0,
    };
}

// pmf of lambda_1 under the ordered discrete beta gas
//   P(lambda) ~ prod_{i<j} Q_theta(lambda_i - lambda_j + (j-i) theta)
//               * prod_j w(lambda_j + (n-j) theta)
inline RealPmf discrete_beta_lambda1_pmf(int n, double m, double theta,
                                         const DiscreteBetaWeight& w,
                                         const TruncationPolicy& trunc = {}) {
    if (n < 1) throw DomainError("discrete_beta_lambda1_pmf: n >= 1");
    if (!(theta > 0)) throw DomainError("discrete_beta_lambda1_pmf: theta > 0");
    bool finite = std::isfinite(m);
    long hard_cap = finite ? static_cast<long>(std::floor(m + (n - 1) * theta)) : -1;
    long cap_hi = finite ? hard_cap : trunc.max_window;
    if (cap_hi < 0) throw DomainError("discrete_beta_lambda1_pmf: empty support");

    std::vector<Real> layer_sums;  // indexed by lambda_1 = k
    Real z(0);
    double tail = 0.0;

    std::vector<long> lam;
    // enumerate weakly decreasing tuples with lambda_1 = k
    std::function<void(int, Real)> rec = [&](int j, Real partial) {
        if (j > n) {
            layer_sums.back() += partial;
            return;
        }
        for (long v = 0; v <= lam[static_cast<std::size_t>(j - 2)]; ++v) {
            Real p2 = partial * w.w(static_cast<double>(v) + (n - j) * theta);
            for (int i = 1; i < j; ++i) {
                double arg = static_cast<double>(lam[static_cast<std::size_t>(i - 1)] - v) +
                             (j - i) * theta;
                p2 *= qtheta(Real(arg), Real(theta));
            }
            lam.push_back(v);
            rec(j + 1, p2);
            lam.pop_back();
        }
    };

    for (long k = 0; k <= cap_hi; ++k) {
        layer_sums.push_back(Real(0));
        lam.assign(1, k);
        rec(2, w.w(static_cast<double>(k) + (n - 1) * theta));
        z += layer_sums.back();
        if (!finite && k >= 6) {
            // tail certificate: Q_theta(x) <= (x + theta)^{2 theta}, at most
            // (k+1)^{n-1} smaller coordinates
            double pairs = 0.5 * n * (n - 1);
            double lk = (n - 1) * std::log(static_cast<double>(k + 2)) +
                        pairs * 2 * theta * std::log(static_cast<double>(k + 1) + n * theta) +
                        (n - 1) * w.log_w_max +
                        static_cast<double>(std::log(to_double(
                            w.w(static_cast<double>(k + 1) + (n - 1) * theta))));
            double r = std::pow((k + 3.0) / (k + 2.0), n - 1 + pairs * 2 * theta) *
                       w.ratio_bound(static_cast<double>(k + 1));
            if (r < 1.0) {
                tail = std::exp(lk) / (1.0 - r) * (1 + 1e-9);
                if (tail < trunc.eps * to_double(z)) break;
            }
            if (k == cap_hi)
                throw ResourceError("discrete_beta_lambda1_pmf: window cap reached");
        }
    }

    RealPmf p;
    p.offset = 0;
    Real z_up = z + Real(tail);
    p.masses = std::move(layer_sums);
    for (auto& v : p.masses) v /= z_up;
    p.residual = tail / to_double(z_up);
    p.exact = false;
    p.rel_err = 1e-60;
    p.trim();
    return p;
}

// ---------------------------------------------------------------------------
// Poisson-type concentration report
// ---------------------------------------------------------------------------

struct ConcentrationReport {
    double mean = 0.0;
    double variance = 0.0;
    bool variance_ok = false;  // Var <= E
    bool upper_ok = false;     // Bennett-type upper tail at every grid point
    bool lower_ok = false;     // lower tail for 0 <= t <= mean
    double worst_upper_slack = 0.0;  // min over grid of bound - tail
    double worst_lower_slack = 0.0;
};

namespace detail {

// a(u) = 2((1+u)log(1+u) - u)/u^2, continuous at 0 with a(0) = 1
inline double bennett_a(double u) {
    if (std::abs(u) < 1e-8) return 1.0 - u / 3.0;
    if (u <= -1.0) return 2.0;
    return 2.0 * ((1.0 + u) * std::log1p(u) - u) / (u * u);
}

} // namespace detail

template <typename T>
ConcentrationReport poisson_concentration_check(const Pmf<T>& p) {
    ConcentrationReport rep;
    rep.mean = p.mean();
    rep.variance = p.variance();
    double resid = p.residual;
    rep.variance_ok = rep.variance <= rep.mean + 1e-12;

    // exact window tails, residual charged against the truncated side
    long lo = p.lo(), hi = p.hi();
    rep.worst_upper_slack = std::numeric_limits<double>::infinity();
    rep.worst_lower_slack = std::numeric_limits<double>::infinity();
    rep.upper_ok = rep.lower_ok = true;
    double up_tail = resid;  // mass at > hi is at most resid
    for (long x = hi; x >= lo; --x) {
        up_tail += to_double(p.at(x));
        double t = static_cast<double>(x) - rep.mean;
        if (t < 0) break;
        double bound = std::exp(-t * t / (2.0 * rep.mean) * detail::bennett_a(t / rep.mean));
        double slack = bound - up_tail + 1e-12;
        rep.worst_upper_slack = std::min(rep.worst_upper_slack, slack);
        if (slack < 0) rep.upper_ok = false;
    }
    double low_tail = 0.0;
    for (long x = lo; x <= hi; ++x) {
        low_tail += to_double(p.at(x));
        double t = rep.mean - static_cast<double>(x);
        if (t < 0) break;
        double bound = std::exp(-t * t / (2.0 * rep.mean) * detail::bennett_a(-t / rep.mean));
        double slack = bound - low_tail + 1e-12;
        rep.worst_lower_slack = std::min(rep.worst_lower_slack, slack);
        if (slack < 0) rep.lower_ok = false;
    }
    return rep;
}

} // namespace logcon
