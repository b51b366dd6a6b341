#pragma once

// Geometric last-passage percolation on the n x n grid: reproducible
// samplers for the iid/inhomogeneous/symmetrized variants and the
// exponential limit, an exact small-n pmf oracle by frontier-profile
// dynamic programming over truncated weights, and the Meixner cross-check
// G = h_n - (n-1).

#include "logcon/ensembles.hpp"
#include "logcon/errors.hpp"
#include "logcon/pmf.hpp"
#include "logcon/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <variant>
#include <vector>

namespace logcon {

struct G2Iid { Rat q; };
struct G2Inhom { std::vector<Rat> a, b; };  // P(w_ij = k) = (1 - a_i b_j)(a_i b_j)^k
struct G1Sym { Rat q; };                    // w_{i,j} = w_{n+1-i,n+1-j}
struct G4Sym { Rat q; };                    // w_{i,j} = w_{j,i}
struct ExponentialIid { double rate = 1.0; };

using LppVariant = std::variant<G2Iid, G2Inhom, G1Sym, G4Sym, ExponentialIid>;

struct LppSpec {
    int n = 1;
    LppVariant variant;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw DomainError("LppSpec: n >= 1");
        std::visit([&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, G2Iid> || std::is_same_v<V, G1Sym> ||
                          std::is_same_v<V, G4Sym>) {
                if (!(v.q > 0 && v.q < 1)) throw DomainError("LppSpec: q in (0,1)");
            } else if constexpr (std::is_same_v<V, G2Inhom>) {
                if (v.a.size() != static_cast<std::size_t>(n) ||
                    v.b.size() != static_cast<std::size_t>(n))
                    throw DomainError("LppSpec: need n inhomogeneity parameters per side");
                for (const Rat& x : v.a)
                    for (const Rat& y : v.b)
                        if (!(x * y > 0 && x * y < 1))
                            throw DomainError("LppSpec: a_i b_j in (0,1)");
            } else {
                if (!(v.rate > 0)) throw DomainError("LppSpec: rate > 0");
            }
        }, variant);
    }
};

struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;

    double min() const { return *std::min_element(values.begin(), values.end()); }
    double max() const { return *std::max_element(values.begin(), values.end()); }
    double mean() const {
        double s = 0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }
};

namespace detail {

// fill the weight matrix for one sample, honoring the variant's symmetry;
// every cell draws from a stream keyed by its canonical representative
inline void fill_weights(const LppSpec& spec, std::uint64_t sample_idx,
                         std::vector<double>& w) {
    const int n = spec.n;
    w.assign(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int i, int j) -> double& {
        return w[static_cast<std::size_t>(i - 1) * n + (j - 1)];
    };
    std::visit([&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, G2Iid>) {
            double q = to_double(v.q);
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    auto rng = derive_stream(spec.seed, sample_idx,
                                             static_cast<std::uint64_t>((i - 1) * n + j - 1));
                    at(i, j) = static_cast<double>(rng.geometric(q));
                }
        } else if constexpr (std::is_same_v<V, G2Inhom>) {
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    double qij = to_double(v.a[static_cast<std::size_t>(i - 1)] *
                                           v.b[static_cast<std::size_t>(j - 1)]);
                    auto rng = derive_stream(spec.seed, sample_idx,
                                             static_cast<std::uint64_t>((i - 1) * n + j - 1));
                    at(i, j) = static_cast<double>(rng.geometric(qij));
                }
        } else if constexpr (std::is_same_v<V, G4Sym>) {
            double q = to_double(v.q);
            double qd = std::sqrt(q);
            for (int i = 1; i <= n; ++i)
                for (int j = i; j <= n; ++j) {
                    auto rng = derive_stream(spec.seed, sample_idx,
                                             static_cast<std::uint64_t>((i - 1) * n + j - 1));
                    double val = static_cast<double>(rng.geometric(i == j ? qd : q));
                    at(i, j) = val;
                    at(j, i) = val;
                }
        } else if constexpr (std::is_same_v<V, G1Sym>) {
            double q = to_double(v.q);
            double qd = std::sqrt(q);
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    if (i + j <= n) {
                        auto rng = derive_stream(spec.seed, sample_idx,
                                                 static_cast<std::uint64_t>((i - 1) * n + j - 1));
                        double val = static_cast<double>(rng.geometric(q));
                        at(i, j) = val;
                        at(n + 1 - i, n + 1 - j) = val;
                    } else if (i + j == n + 1 && i <= j) {
                        auto rng = derive_stream(spec.seed, sample_idx,
                                                 static_cast<std::uint64_t>((i - 1) * n + j - 1));
                        double val = static_cast<double>(rng.geometric(qd));
                        at(i, j) = val;
                        at(j, i) = val;
                    }
                }
        } else {  // exponential
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    auto rng = derive_stream(spec.seed, sample_idx,
                                             static_cast<std::uint64_t>((i - 1) * n + j - 1));
                    at(i, j) = rng.exponential(v.rate);
                }
        }
    }, spec.variant);
}

inline double passage_time(int n, const std::vector<double>& w) {
    std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
    // row[0] stays a zero sentinel; unreachable cells must not help, so the
    // first row uses only the left neighbor
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            double up = (i > 1) ? row[static_cast<std::size_t>(j)] : 0.0;
            double left = (j > 1) ? row[static_cast<std::size_t>(j - 1)] : 0.0;
            row[static_cast<std::size_t>(j)] =
                std::max(up, left) + w[static_cast<std::size_t>(i - 1) * n + (j - 1)];
        }
    }
    return row[static_cast<std::size_t>(n)];
}

} // namespace detail

// i.i.d. samples of the passage time from (1,1) to (n,n); bit-reproducible
// from (spec, seed) under any parallel schedule
inline SampleBatch sample_passage(const LppSpec& spec, long count) {
    spec.validate();
    if (count < 1) throw DomainError("sample_passage: count >= 1");
    SampleBatch out;
    out.seed = spec.seed;
    out.values.resize(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t s) {
        std::vector<double> w;
        detail::fill_weights(spec, static_cast<std::uint64_t>(s), w);
        out.values[s] = detail::passage_time(spec.n, w);
    });
    return out;
}

// ---------------------------------------------------------------------------
// exact pmf for the iid geometric variant at n <= 3
// ---------------------------------------------------------------------------

struct G2ExactTrunc {
    double eps = 1e-12;
    std::size_t prune_limit = 60000;  // frontier states kept per cell
};

// Frontier-profile DP: sweeps the grid cell by cell carrying the joint law
// of the staircase profile over truncated weights; pruned and truncated
// mass is certified into the residual.
inline RatPmf exact_g2_pmf_small(int n, const Rat& q, const G2ExactTrunc& trunc = {}) {
    if (n < 1 || n > 3) throw DomainError("exact_g2_pmf_small: n in {1,2,3}");
    if (!(q > 0 && q < 1)) throw DomainError("exact_g2_pmf_small: q in (0,1)");

    const double qd = to_double(q);
    const int cells = n * n;
    // per-weight truncation: q^{K+1} <= eps / (2 * cells)
    long K = static_cast<long>(std::ceil(std::log(trunc.eps / (2.0 * cells)) / std::log(qd))) + 1;
    K = std::max<long>(K, 4);
    std::vector<Rat> wmass(static_cast<std::size_t>(K) + 1);
    {
        Rat pk = Rat(1) - q;
        for (long k = 0; k <= K; ++k) {
            wmass[static_cast<std::size_t>(k)] = pk;
            pk *= q;
        }
    }

    using Profile = std::vector<long>;
    std::map<Profile, Rat> states;
    states[Profile(static_cast<std::size_t>(n), 0)] = Rat(1);
    Rat pruned(0);

    double prune_budget_per_cell = trunc.eps / (2.0 * cells);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            std::map<Profile, Rat> next;
            for (const auto& [prof, mass] : states) {
                long up = (i > 1) ? prof[static_cast<std::size_t>(j - 1)] : 0;
                long left = (j > 1) ? prof[static_cast<std::size_t>(j - 2)] : 0;
                long base = std::max(up, left);
                Profile np = prof;
                for (long k = 0; k <= K; ++k) {
                    np[static_cast<std::size_t>(j - 1)] = base + k;
                    next[np] += mass * wmass[static_cast<std::size_t>(k)];
                }
            }
            // prune the lightest states within the per-cell budget
            if (next.size() > trunc.prune_limit) {
                std::vector<std::pair<Rat, Profile>> order;
                order.reserve(next.size());
                for (const auto& [prof, mass] : next) order.emplace_back(mass, prof);
                std::sort(order.begin(), order.end());
                Rat dropped(0);
                std::size_t di = 0;
                while (next.size() - di > trunc.prune_limit &&
                       to_double(dropped + order[di].first) < prune_budget_per_cell) {
                    dropped += order[di].first;
                    next.erase(order[di].second);
                    ++di;
                }
                pruned += dropped;
            }
            states = std::move(next);
        }
    }

    long gmax = 0;
    for (const auto& [prof, mass] : states) gmax = std::max(gmax, prof.back());
    RatPmf p;
    p.offset = 0;
    p.masses.assign(static_cast<std::size_t>(gmax) + 1, Rat(0));
    Rat total(0);
    for (const auto& [prof, mass] : states) {
        p.masses[static_cast<std::size_t>(prof.back())] += mass;
        total += mass;
    }
    p.residual = to_double(Rat(1) - total);  // weight truncation + pruning
    p.exact = true;
    p.trim();
    return p;
}

// ---------------------------------------------------------------------------
// Meixner cross-check: G^{(2)} equals h_n shifted by n-1
// ---------------------------------------------------------------------------

struct MeixnerCrossReport {
    int n = 0;
    long shift = 0;            // applied to h_n
    double max_gap = 0.0;      // pointwise, after the shift
    double resid_lpp = 0.0;
    double resid_ensemble = 0.0;
};

inline MeixnerCrossReport meixner_crosscheck(int n, const Rat& q,
                                             const G2ExactTrunc& trunc = {}) {
    if (n < 1 || n > 3)
        throw DomainError("meixner_crosscheck: exact comparison needs n in {1,2,3}");
    auto lpp = exact_g2_pmf_small(n, q, trunc);

    EnsembleSpec spec{n, GeometricPowerWeights{q}, PowerInteraction{2}, 0};
    TruncationPolicy tp;
    tp.eps = trunc.eps;
    auto ms = compute_marginals<Rat>(spec, tp);
    RatPmf hn = ms.marginals[static_cast<std::size_t>(n - 1)];
    hn.offset -= (n - 1);

    MeixnerCrossReport rep;
    rep.n = n;
    rep.shift = n - 1;
    rep.max_gap = max_pointwise_gap(lpp, hn);
    rep.resid_lpp = lpp.residual;
    rep.resid_ensemble = hn.residual;
    return rep;
}

} // namespace logcon
