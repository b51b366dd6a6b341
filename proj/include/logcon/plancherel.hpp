#pragma once

// beta-Plancherel measures mu_n ~ d_lambda^beta, their nu/M mixtures, the
// geometric-weight bridge gamma_{n,q,beta} with its lambda <-> h bijection,
// and the conjecture-verification suite: full and edge-windowed Chen checks,
// the fixed-sum rho ensembles, random words, and Poissonization.
//
// Exactness: integer beta runs in Rat end-to-end; other beta in 256-bit Real
// with powers of exact big integers.  Mixture windows carry a certified tail
// bound built from exact partition counts p(k), the identity sum d^2 = k!,
// and Hoelder's inequality:
//   sum_{lam |- k} (d/k!)^beta <= p(k)^{max(0, 1-beta/2)} (k!)^{-beta/2}.

#include "logcon/ensembles.hpp"
#include "logcon/logconcave.hpp"
#include "logcon/partitions.hpp"
#include "logcon/pmf.hpp"

#include <cmath>
#include <optional>
#include <tuple>

namespace logcon {

struct MixtureSpec {
    Rat alpha = Rat(1);
    double beta = 2.0;
    double eps = 1e-12;
    long max_level = 400;                          // largest partition level
    unsigned long long max_partition_visits = 30000000ULL;

    void validate() const {
        if (!(alpha > 0)) throw DomainError("MixtureSpec: alpha > 0");
        if (!(beta > 0)) throw DomainError("MixtureSpec: beta > 0");
        if (!(eps > 0)) throw DomainError("MixtureSpec: eps > 0");
    }
};

namespace detail {

inline bool integral_beta(double beta) {
    return beta >= 1.0 && beta <= 64.0 && beta == std::floor(beta);
}

template <typename S>
S dim_power(const Int& d, double beta) {
    if constexpr (std::is_same_v<S, Rat>) {
        return Rat(int_pow(d, static_cast<unsigned long>(beta)));
    } else {
        return pow(Real(d), Real(beta));
    }
}

// log of the Hoelder bound on alpha^k sum_{lam |- k} (d/k!)^beta
inline double log_nu_term_bound(double log_alpha, double beta, long k,
                                const std::vector<double>& log_p) {
    double e = std::max(0.0, 1.0 - beta / 2.0);
    return k * log_alpha + e * log_p[static_cast<std::size_t>(k)] -
           0.5 * beta * std::lgamma(static_cast<double>(k) + 1.0);
}

struct NuTailTable {
    std::vector<double> log_p;     // log of exact p(k)
    double log_alpha;
    double beta;

    // certified upper bound on sum_{k > K} alpha^k S_beta(k)
    double tail_beyond(long K) const {
        long kmax = static_cast<long>(log_p.size()) - 1;
        double total = 0.0;
        long k = K + 1;
        for (; k <= kmax; ++k) {
            double t = std::exp(log_nu_term_bound(log_alpha, beta, k, log_p));
            total += t;
            // once the certified step ratio drops below 1/2, close with a
            // geometric remainder: p(k+1) <= 2 p(k) for all k
            double e = std::max(0.0, 1.0 - beta / 2.0);
            double r = std::exp(log_alpha) * std::pow(2.0, e) *
                       std::pow(static_cast<double>(k) + 1.0, -beta / 2.0);
            if (r < 0.5) {
                total += t * r / (1.0 - r);
                return total * (1.0 + 1e-9);
            }
        }
        return std::numeric_limits<double>::infinity();
    }
};

inline NuTailTable make_nu_tail_table(const Rat& alpha, double beta, long kmax) {
    NuTailTable t;
    t.log_alpha = std::log(to_double(alpha));
    t.beta = beta;
    auto p = partition_counts_upto(kmax);
    t.log_p.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        t.log_p[i] = static_cast<double>(log(Real(p[i])).convert_to<double>());
    return t;
}

} // namespace detail

// ---------------------------------------------------------------------------
// beta-Plancherel fixed-n marginals
// ---------------------------------------------------------------------------

// pmf of lambda_i under mu_n ~ d_lambda^beta on partitions of n; exact for
// integer beta (support {0..n}, zero residual)
template <typename S>
Pmf<S> plancherel_lambda_pmf_t(long n, double beta, int i,
                               unsigned long long max_visits = 30000000ULL) {
    if (n < 0) throw DomainError("plancherel_lambda_pmf: n >= 0");
    if (i < 1) throw DomainError("plancherel_lambda_pmf: row index >= 1");
    if (!(beta > 0)) throw DomainError("plancherel_lambda_pmf: beta > 0");
    if (n > 0 && partition_count(n) > Int(max_visits))
        throw ResourceError("plancherel_lambda_pmf: p(n) exceeds budget");
    std::vector<S> acc(static_cast<std::size_t>(n) + 1, S(0));
    S z(0);
    for_each_partition(n, [&](const std::vector<int>& parts) {
        Int d = dim_syt_parts(parts);
        S t = detail::dim_power<S>(d, beta);
        int li = (i <= static_cast<int>(parts.size())) ? parts[static_cast<std::size_t>(i - 1)] : 0;
        acc[static_cast<std::size_t>(li)] += t;
        z += t;
    });
    Pmf<S> p;
    p.offset = 0;
    p.masses = std::move(acc);
    for (auto& m : p.masses) m /= z;
    p.residual = 0.0;
    p.exact = std::is_same_v<S, Rat>;
    p.rel_err = std::is_same_v<S, Rat> ? 0.0 : 1e-60;
    p.trim();
    return p;
}

inline AnyPmf plancherel_lambda_pmf(long n, double beta, int i) {
    if (detail::integral_beta(beta)) return plancherel_lambda_pmf_t<Rat>(n, beta, i);
    return plancherel_lambda_pmf_t<Real>(n, beta, i);
}

// ---------------------------------------------------------------------------
// nu mixture weights and the mixed lambda_i laws
// ---------------------------------------------------------------------------

namespace detail {

// Plans the mixture window: the smallest K with certified tail < eps * z_lb,
// refusing early when even the optimistic plan blows the partition budget.
inline std::pair<long, NuTailTable> plan_nu_window(const MixtureSpec& spec) {
    spec.validate();
    long kmax = spec.max_level + 700;
    auto tails = make_nu_tail_table(spec.alpha, spec.beta, kmax);
    auto p = partition_counts_upto(spec.max_level);

    // optimistic lower bound on the needed level: Z is at most the certified
    // bound summed over every level
    double z_ub = tails.tail_beyond(-1);
    long k_lo = 0;
    while (k_lo < spec.max_level && !(tails.tail_beyond(k_lo) < spec.eps * z_ub)) ++k_lo;
    Int visits_lo = 0;
    for (long k = 0; k <= k_lo; ++k) visits_lo += p[static_cast<std::size_t>(k)];
    if (visits_lo > Int(spec.max_partition_visits)) {
        throw ResourceError(
            "nu mixture: certified residual " + std::to_string(spec.eps) +
            " needs partition levels through at least k=" + std::to_string(k_lo) +
            " (~" + visits_lo.str() + " partitions), over the budget of " +
            std::to_string(spec.max_partition_visits) +
            "; the sum over lambda of d_lambda^beta admits no known closed form, so every"
            " level must be enumerated");
    }
    return {k_lo, std::move(tails)};
}

} // namespace detail

// pmf of the mixture level X ~ nu: masses proportional to alpha^k S_beta(k)
template <typename S>
Pmf<S> nu_mixture_t(const MixtureSpec& spec) {
    auto [k_plan, tails] = detail::plan_nu_window(spec);
    (void)k_plan;
    std::vector<S> terms;
    S z(0);
    unsigned long long visits = 0;
    double tail = 0;
    bool closed = false;
    for (long k = 0; k <= spec.max_level; ++k) {
        Int dsum_exact(0);
        Real dsum_real(0);
        for_each_partition(k, [&](const std::vector<int>& parts) {
            ++visits;
            Int d = dim_syt_parts(parts);
            if constexpr (std::is_same_v<S, Rat>) {
                dsum_exact += int_pow(d, static_cast<unsigned long>(spec.beta));
            } else {
                dsum_real += pow(Real(d), Real(spec.beta));
            }
        });
        S term;
        if constexpr (std::is_same_v<S, Rat>) {
            Int kfac_pow = int_pow(factorial(static_cast<unsigned long>(k)),
                                   static_cast<unsigned long>(spec.beta));
            term = rat_pow(spec.alpha, k) * Rat(dsum_exact) / Rat(kfac_pow);
        } else {
            Real kfac_pow = pow(Real(factorial(static_cast<unsigned long>(k))), Real(spec.beta));
            term = pow(Real(spec.alpha), Real(static_cast<double>(k))) * dsum_real / kfac_pow;
        }
        terms.push_back(term);
        z += term;
        if (visits > spec.max_partition_visits)
            throw ResourceError("nu_mixture: partition budget exceeded at level " +
                                std::to_string(k));
        tail = tails.tail_beyond(k);
        if (tail < spec.eps * to_double(z)) { closed = true; break; }
    }
    if (!closed) throw ResourceError("nu_mixture: max_level reached before residual target");

    Pmf<S> p;
    p.offset = 0;
    p.masses = std::move(terms);
    S z_up = z;
    if constexpr (std::is_same_v<S, Rat>) z_up += rat_from_double(tail);
    else z_up += Real(tail);
    for (auto& m : p.masses) m /= z_up;
    p.residual = tail / to_double(z_up);
    p.exact = std::is_same_v<S, Rat>;
    p.rel_err = std::is_same_v<S, Rat> ? 0.0 : 1e-60;
    return p;
}

inline AnyPmf nu_mixture(const MixtureSpec& spec) {
    if (detail::integral_beta(spec.beta)) return nu_mixture_t<Rat>(spec);
    return nu_mixture_t<Real>(spec);
}

// pmf of lambda_i under the mixture M: draw X ~ nu, then lambda ~ mu_X
template <typename S>
Pmf<S> mixture_lambda_pmf_t(const MixtureSpec& spec, int i) {
    if (i < 1) throw DomainError("mixture_lambda_pmf: row index >= 1");
    auto [k_plan, tails] = detail::plan_nu_window(spec);
    (void)k_plan;
    std::vector<S> acc;   // by lambda_i value
    S z(0);
    unsigned long long visits = 0;
    double tail = 0;
    bool closed = false;
    for (long k = 0; k <= spec.max_level; ++k) {
        if (static_cast<long>(acc.size()) < k + 1) acc.resize(static_cast<std::size_t>(k) + 1, S(0));
        // per-level sums of d^beta grouped by lambda_i, folded once
        std::vector<Int> dj_exact;
        std::vector<Real> dj_real;
        if constexpr (std::is_same_v<S, Rat>) dj_exact.assign(static_cast<std::size_t>(k) + 1, Int(0));
        else dj_real.assign(static_cast<std::size_t>(k) + 1, Real(0));
        for_each_partition(k, [&](const std::vector<int>& parts) {
            ++visits;
            Int d = dim_syt_parts(parts);
            int li = (i <= static_cast<int>(parts.size())) ? parts[static_cast<std::size_t>(i - 1)] : 0;
            if constexpr (std::is_same_v<S, Rat>) {
                dj_exact[static_cast<std::size_t>(li)] += int_pow(d, static_cast<unsigned long>(spec.beta));
            } else {
                dj_real[static_cast<std::size_t>(li)] += pow(Real(d), Real(spec.beta));
            }
        });
        if constexpr (std::is_same_v<S, Rat>) {
            Rat scale = rat_pow(spec.alpha, k) /
                        Rat(int_pow(factorial(static_cast<unsigned long>(k)),
                                    static_cast<unsigned long>(spec.beta)));
            for (long j = 0; j <= k; ++j)
                if (dj_exact[static_cast<std::size_t>(j)] != 0) {
                    Rat t = scale * Rat(dj_exact[static_cast<std::size_t>(j)]);
                    acc[static_cast<std::size_t>(j)] += t;
                    z += t;
                }
        } else {
            Real scale = pow(Real(spec.alpha), Real(static_cast<double>(k))) /
                         pow(Real(factorial(static_cast<unsigned long>(k))), Real(spec.beta));
            for (long j = 0; j <= k; ++j)
                if (dj_real[static_cast<std::size_t>(j)] != 0) {
                    Real t = scale * dj_real[static_cast<std::size_t>(j)];
                    acc[static_cast<std::size_t>(j)] += t;
                    z += t;
                }
        }
        if (visits > spec.max_partition_visits)
            throw ResourceError("mixture_lambda_pmf: partition budget exceeded at level " +
                                std::to_string(k));
        tail = tails.tail_beyond(k);
        if (tail < spec.eps * to_double(z)) { closed = true; break; }
    }
    if (!closed) throw ResourceError("mixture_lambda_pmf: max_level reached before residual target");

    Pmf<S> p;
    p.offset = 0;
    p.masses = std::move(acc);
    S z_up = z;
    if constexpr (std::is_same_v<S, Rat>) z_up += rat_from_double(tail);
    else z_up += Real(tail);
    for (auto& m : p.masses) m /= z_up;
    p.residual = tail / to_double(z_up);
    p.exact = std::is_same_v<S, Rat>;
    p.rel_err = std::is_same_v<S, Rat> ? 0.0 : 1e-60;
    p.trim();
    return p;
}

inline AnyPmf mixture_lambda_pmf(const MixtureSpec& spec, int i) {
    if (detail::integral_beta(spec.beta)) return mixture_lambda_pmf_t<Rat>(spec, i);
    return mixture_lambda_pmf_t<Real>(spec, i);
}

// ---------------------------------------------------------------------------
// gamma_{n,q,beta}: geometric-weight gas under the lambda <-> h bijection
// ---------------------------------------------------------------------------

// lambda_i = h_{n+1-i} - (n-i)
inline std::vector<long> gamma_h_from_partition(const Partition& lam, int n) {
    if (lam.length() > n) throw DomainError("gamma_h_from_partition: length(lambda) > n");
    std::vector<long> h(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        h[static_cast<std::size_t>(j - 1)] = lam.part(n + 1 - j) + (j - 1);
    return h;
}

inline Partition gamma_partition_from_h(const std::vector<long>& h) {
    int n = static_cast<int>(h.size());
    std::vector<int> parts;
    for (int i = 1; i <= n; ++i) {
        long v = h[static_cast<std::size_t>(n - i)] - (n - i);
        if (v < 0) throw DomainError("gamma_partition_from_h: not an N-valued configuration");
        if (v > 0) parts.push_back(static_cast<int>(v));
        else break;
    }
    return Partition(std::move(parts));
}

// pmf of lambda_1 under gamma_{n,q,beta}; exact for integer beta
inline AnyPmf gamma_lambda1_pmf(int n, const Rat& q, double beta,
                                const TruncationPolicy& trunc = {}) {
    if (n < 1) throw DomainError("gamma_lambda1_pmf: n >= 1");
    if (!(q > 0 && q < 1)) throw DomainError("gamma_lambda1_pmf: q in (0,1)");
    if (!(beta > 0)) throw DomainError("gamma_lambda1_pmf: beta > 0");
    EnsembleSpec spec{n, GeometricPowerWeights{q}, PowerInteraction{2}, 0};
    auto shift = [n](auto pmf) {
        pmf.offset -= (n - 1);
        return pmf;
    };
    if (detail::integral_beta(beta)) {
        spec.interaction = PowerInteraction{static_cast<int>(beta)};
        auto ms = compute_marginals<Rat>(spec, trunc);
        return shift(std::move(ms.marginals[static_cast<std::size_t>(n - 1)]));
    }
    spec.interaction = RealPowerInteraction{beta};
    auto ms = compute_marginals<Real>(spec, trunc);
    return shift(std::move(ms.marginals[static_cast<std::size_t>(n - 1)]));
}

// ---------------------------------------------------------------------------
// limiting ratio of totals under gamma_{n, alpha/n^beta, beta}
// ---------------------------------------------------------------------------

struct RatioCheck {
    double lhs = 0;  // gamma(sum lambda = k+1) / gamma(sum lambda = k)
    double rhs = 0;  // alpha * S_beta(k+1) / S_beta(k), the n -> inf limit
    double gap = 0;
};

namespace detail {

// sum over lambda |- k with len <= n of Vandermonde(h(lambda))^beta
template <typename S>
S fixed_sum_vandermonde(int n, long k, double beta) {
    S total(0);
    for_each_partition(k, [&](const std::vector<int>& parts) {
        Partition lam(parts);
        auto h = gamma_h_from_partition(lam, n);
        Int v(1);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                v *= Int(h[static_cast<std::size_t>(b)] - h[static_cast<std::size_t>(a)]);
        total += dim_power<S>(v, beta);
    }, n);
    return total;
}

template <typename S>
S s_beta_level(long k, double beta) {
    S total(0);
    for_each_partition(k, [&](const std::vector<int>& parts) {
        total += dim_power<S>(dim_syt_parts(parts), beta);
    });
    if constexpr (std::is_same_v<S, Rat>) {
        return total / Rat(int_pow(factorial(static_cast<unsigned long>(k)),
                                   static_cast<unsigned long>(beta)));
    } else {
        return total / pow(Real(factorial(static_cast<unsigned long>(k))), Real(beta));
    }
}

} // namespace detail

inline RatioCheck limiting_ratio_check(int n, const Rat& alpha, double beta, long k) {
    if (n <= k + 1) throw DomainError("limiting_ratio_check: requires n > k + 1");
    if (!(alpha > 0) || !(beta > 0)) throw DomainError("limiting_ratio_check: positive parameters");
    RatioCheck out;
    if (detail::integral_beta(beta)) {
        Rat q = alpha / Rat(int_pow(Int(n), static_cast<unsigned long>(beta)));
        Rat lhs = q * detail::fixed_sum_vandermonde<Rat>(n, k + 1, beta) /
                  detail::fixed_sum_vandermonde<Rat>(n, k, beta);
        Rat rhs = alpha * detail::s_beta_level<Rat>(k + 1, beta) /
                  detail::s_beta_level<Rat>(k, beta);
        out.lhs = to_double(lhs);
        out.rhs = to_double(rhs);
        out.gap = to_double(lhs - rhs);
    } else {
        Real q = Real(alpha) / pow(Real(n), Real(beta));
        Real lhs = q * detail::fixed_sum_vandermonde<Real>(n, k + 1, beta) /
                   detail::fixed_sum_vandermonde<Real>(n, k, beta);
        Real rhs = Real(alpha) * detail::s_beta_level<Real>(k + 1, beta) /
                   detail::s_beta_level<Real>(k, beta);
        out.lhs = to_double(lhs);
        out.rhs = to_double(rhs);
        out.gap = to_double(lhs - rhs);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chen's conjecture checks
// ---------------------------------------------------------------------------

// Full-census check of the first-row log-concavity at size n.
inline LogConcavityReport chen_check(long n, long budget_n = 40) {
    auto table = lis_counts(n, budget_n);
    return check_logconcave_sequence(table.counts, table.lo);
}

// ell_{n,k} = sum over lambda = (k, mu), mu |- n-k, mu_1 <= k of d_lambda^2
inline Int edge_row_count(long n, long k) {
    if (k < 1 || k > n) return 0;
    Int total(0);
    for_each_partition(n - k, [&](const std::vector<int>& parts) {
        if (!parts.empty() && parts[0] > static_cast<int>(k)) return;
        std::vector<int> lam;
        lam.reserve(parts.size() + 1);
        lam.push_back(static_cast<int>(k));
        lam.insert(lam.end(), parts.begin(), parts.end());
        Int d = dim_syt_parts(lam);
        total += d * d;
    });
    return total;
}

// Windowed check: the inequality for k in {n-j, ..., n} only, which needs
// just the edge counts ell_{n, n-j-1 .. n}.
inline LogConcavityReport chen_check_window(long n, long j) {
    if (n < 1) throw DomainError("chen_check_window: n >= 1");
    if (j < 0 || n - j - 1 < 1) throw DomainError("chen_check_window: window too wide");
    long lo = n - j - 1;
    std::vector<Int> counts;
    for (long k = lo; k <= n; ++k) counts.push_back(edge_row_count(n, k));
    counts.push_back(Int(0));  // lambda_1 = n + 1 is impossible
    return check_logconcave_sequence(counts, lo);
}

// ---------------------------------------------------------------------------
// rho_{n,k}: fixed total displacement
// ---------------------------------------------------------------------------

// pmf of h_n under rho ~ Vandermonde(h)^beta restricted to
// sum h_i = k + n(n-1)/2; exact for integer beta
inline AnyPmf rho_hn_pmf(int n, long k, double beta) {
    if (!(n > k)) throw DomainError("rho_hn_pmf: requires n > k");
    if (k < 0) throw DomainError("rho_hn_pmf: k >= 0");
    auto run = [&]<typename S>() -> Pmf<S> {
        std::vector<S> acc(static_cast<std::size_t>(k) + 1, S(0));
        S z(0);
        for_each_partition(k, [&](const std::vector<int>& parts) {
            Partition lam(parts);
            auto h = gamma_h_from_partition(lam, n);
            Int v(1);
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    v *= Int(h[static_cast<std::size_t>(b)] - h[static_cast<std::size_t>(a)]);
            S t = detail::dim_power<S>(v, beta);
            acc[static_cast<std::size_t>(lam.part(1))] += t;
            z += t;
        }, n);
        Pmf<S> p;
        p.offset = n - 1;  // h_n = lambda_1 + n - 1
        p.masses = std::move(acc);
        for (auto& m : p.masses) m /= z;
        p.residual = 0.0;
        p.exact = std::is_same_v<S, Rat>;
        p.rel_err = std::is_same_v<S, Rat> ? 0.0 : 1e-60;
        p.trim();
        return p;
    };
    if (detail::integral_beta(beta)) return run.template operator()<Rat>();
    return run.template operator()<Real>();
}

inline LogConcavityReport rho_check(int n, long k, double beta) {
    return check_logconcave_any(rho_hn_pmf(n, k, beta));
}

// random-word analogue of the Chen check
inline LogConcavityReport word_chen_check(int m, long n, long budget_n = 14) {
    if (n > budget_n) throw ResourceError("word_chen_check: n exceeds budget");
    auto table = word_lis_counts(m, n);
    return check_logconcave_sequence(table.counts, table.lo);
}

// ---------------------------------------------------------------------------
// Poissonization
// ---------------------------------------------------------------------------

struct PoissonizationCondition {
    bool holds = true;
    // witnessing (i, j, k) when the displayed inequality fails
    std::optional<std::tuple<long, long, long>> witness;
};

// checks mu_i(k-1)/i! * mu_j(k+1)/j! <= mu_f(k)/f! * mu_c(k)/c! with
// f,c the floor/ceil midpoints of (i,j), over all i,j and k >= 2 in window
inline PoissonizationCondition poissonization_condition_check(
    const std::vector<RatPmf>& family, long k_max) {
    PoissonizationCondition out;
    long I = static_cast<long>(family.size()) - 1;
    if (I < 0) throw DomainError("poissonization_condition_check: empty family");
    std::vector<Rat> inv_fact(static_cast<std::size_t>(I) + 1);
    for (long i = 0; i <= I; ++i)
        inv_fact[static_cast<std::size_t>(i)] =
            Rat(1) / Rat(factorial(static_cast<unsigned long>(i)));
    for (long i = 0; i <= I; ++i) {
        for (long j = 0; j <= I; ++j) {
            long f = (i + j) / 2, c = i + j - f;
            for (long k = 2; k <= k_max; ++k) {
                Rat lhs = family[static_cast<std::size_t>(i)].at(k - 1) * inv_fact[static_cast<std::size_t>(i)] *
                          family[static_cast<std::size_t>(j)].at(k + 1) * inv_fact[static_cast<std::size_t>(j)];
                Rat rhs = family[static_cast<std::size_t>(f)].at(k) * inv_fact[static_cast<std::size_t>(f)] *
                          family[static_cast<std::size_t>(c)].at(k) * inv_fact[static_cast<std::size_t>(c)];
                if (lhs > rhs) {
                    out.holds = false;
                    if (!out.witness) out.witness = {i, j, k};
                    return out;
                }
            }
        }
    }
    return out;
}

// Y ~ mu_X with X ~ Poisson(lambda), the family given up to index I; the
// Poisson tail beyond I is certified into the residual
inline RatPmf poissonize(const std::vector<RatPmf>& family, const Rat& lambda) {
    if (family.empty()) throw DomainError("poissonize: empty family");
    if (!(lambda > 0)) throw DomainError("poissonize: lambda > 0");
    long I = static_cast<long>(family.size()) - 1;
    if (!(lambda < Rat(I + 2)))
        throw DomainError("poissonize: family too short for a certified Poisson tail");
    long lo = family[0].lo(), hi = family[0].hi();
    for (const auto& f : family) {
        lo = std::min(lo, f.lo());
        hi = std::max(hi, f.hi());
    }
    std::vector<Rat> acc(static_cast<std::size_t>(hi - lo + 1), Rat(0));
    Rat z(0);
    double fam_resid = 0.0;
    Rat w(1);  // lambda^i / i!
    for (long i = 0; i <= I; ++i) {
        if (i > 0) w = w * lambda / Rat(i);
        for (long v = family[static_cast<std::size_t>(i)].lo();
             v <= family[static_cast<std::size_t>(i)].hi(); ++v)
            acc[static_cast<std::size_t>(v - lo)] += w * family[static_cast<std::size_t>(i)].at(v);
        z += w;
        fam_resid += to_double(w) * family[static_cast<std::size_t>(i)].residual;
    }
    // remaining Poisson weight: lambda^{I+1}/(I+1)! * 1/(1 - lambda/(I+2))
    Rat tail = w * lambda / Rat(I + 1) / (Rat(1) - lambda / Rat(I + 2));
    Rat z_up = z + tail;
    RatPmf p;
    p.offset = lo;
    p.masses = std::move(acc);
    for (auto& m : p.masses) m /= z_up;
    p.residual = to_double((tail + rat_from_double(fam_resid)) / z_up);
    p.exact = true;
    p.trim();
    return p;
}

} // namespace logcon
