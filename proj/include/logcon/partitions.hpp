#pragma once

// Integer partitions and exact tableau combinatorics: enumeration in
// reverse-lexicographic order, standard/semistandard tableau counts,
// Schur polynomial evaluation (Jacobi-Trudi), and longest-increasing-
// subsequence census tables for permutations and words.

#include "logcon/errors.hpp"
#include "logcon/numeric.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace logcon {

class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 1) throw DomainError("Partition: parts must be positive");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw DomainError("Partition: parts must be weakly decreasing");
        }
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }

    // |lambda|, the number of boxes
    long size() const {
        long s = 0;
        for (int p : parts_) s += p;
        return s;
    }

    // 1-based row length, zero-padded beyond length()
    int part(int i) const {
        return (i >= 1 && i <= length()) ? parts_[i - 1] : 0;
    }

    Partition conjugate() const {
        std::vector<int> c;
        if (!parts_.empty()) {
            c.resize(parts_[0], 0);
            for (int p : parts_)
                for (int j = 0; j < p; ++j) c[j]++;
        }
        return Partition(std::move(c));
    }

    bool operator==(const Partition& o) const { return parts_ == o.parts_; }
    bool operator<(const Partition& o) const { return parts_ < o.parts_; }

private:
    std::vector<int> parts_;
};

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

namespace detail {

template <typename Fn>
void partition_rec(long remaining, int max_part, long max_len,
                   std::vector<int>& acc, Fn& fn) {
    if (remaining == 0) {
        fn(const_cast<const std::vector<int>&>(acc));
        return;
    }
    if (max_len <= 0) return;
    int hi = static_cast<int>(std::min<long>(max_part, remaining));
    // need hi * max_len >= remaining to be completable
    for (int p = hi; p >= 1; --p) {
        if (static_cast<long>(p) * max_len < remaining) break;
        acc.push_back(p);
        partition_rec(remaining - p, p, max_len - 1, acc, fn);
        acc.pop_back();
    }
}

} // namespace detail

// Visits every partition of n (optionally constrained) exactly once, in
// reverse-lexicographic order: (n), (n-1,1), ..., (1,...,1).  The vector
// passed to fn is reused between calls.
template <typename Fn>
void for_each_partition(long n, Fn fn, std::optional<int> max_length = std::nullopt,
                        std::optional<int> max_part = std::nullopt) {
    if (n < 0) throw DomainError("for_each_partition: n must be >= 0");
    std::vector<int> acc;
    long ml = max_length ? *max_length : n;
    int mp = static_cast<int>(max_part ? std::min<long>(*max_part, n) : n);
    if (n == 0) {
        fn(const_cast<const std::vector<int>&>(acc));
        return;
    }
    detail::partition_rec(n, mp, ml, acc, fn);
}

inline std::vector<Partition> partitions_of(long n,
                                            std::optional<int> max_length = std::nullopt,
                                            std::optional<int> max_part = std::nullopt) {
    std::vector<Partition> out;
    for_each_partition(n, [&](const std::vector<int>& parts) {
        out.emplace_back(Partition(parts));
    }, max_length, max_part);
    return out;
}

// p(0..nmax) by the Euler pentagonal-number recurrence, exact.
inline std::vector<Int> partition_counts_upto(long nmax) {
    std::vector<Int> p(static_cast<std::size_t>(nmax) + 1);
    p[0] = 1;
    for (long n = 1; n <= nmax; ++n) {
        Int acc = 0;
        for (long k = 1;; ++k) {
            long g1 = k * (3 * k - 1) / 2;
            long g2 = k * (3 * k + 1) / 2;
            if (g1 > n && g2 > n) break;
            Int term = 0;
            if (g1 <= n) term += p[n - g1];
            if (g2 <= n) term += p[n - g2];
            if (k % 2 == 1) acc += term; else acc -= term;
        }
        p[n] = acc;
    }
    return p;
}

inline Int partition_count(long n) {
    if (n < 0) return 0;
    return partition_counts_upto(n).back();
}

// ---------------------------------------------------------------------------
// tableau counts
// ---------------------------------------------------------------------------

namespace detail {

// product of many machine-size positive factors, chunked through uint64
inline Int product_chunked(const std::vector<unsigned long>& factors) {
    Int total = 1;
    unsigned long long chunk = 1;
    for (unsigned long f : factors) {
        if (f != 0 && chunk > 0xffffffffffffffffULL / f) {
            total *= Int(chunk);
            chunk = 1;
        }
        chunk *= f;
    }
    total *= Int(chunk);
    return total;
}

inline std::vector<unsigned long> hook_lengths(const std::vector<int>& parts) {
    std::vector<unsigned long> hooks;
    int ell = static_cast<int>(parts.size());
    if (ell == 0) return hooks;
    std::vector<int> col(parts[0], 0);
    for (int p : parts)
        for (int j = 0; j < p; ++j) col[j]++;
    hooks.reserve(static_cast<std::size_t>(parts[0]) * ell);
    for (int i = 0; i < ell; ++i)
        for (int j = 0; j < parts[i]; ++j)
            hooks.push_back(static_cast<unsigned long>((parts[i] - j) + (col[j] - i) - 1));
    return hooks;
}

} // namespace detail

enum class DimMethod { Hook, Frobenius };

// Number of standard Young tableaux of the given shape (raw-parts fast path).
inline Int dim_syt_parts(const std::vector<int>& parts,
                         DimMethod method = DimMethod::Hook) {
    long n = 0;
    for (int p : parts) n += p;
    if (n == 0) return 1;
    if (method == DimMethod::Hook) {
        Int denom = detail::product_chunked(detail::hook_lengths(parts));
        Int out;
        mpz_divexact(out.backend().data(), factorial(static_cast<unsigned long>(n)).backend().data(),
                     denom.backend().data());
        return out;
    }
    // Frobenius determinant form: mu = (l_ell, l_{ell-1}+1, ..., l_1+ell-1),
    // d = n! * Vandermonde(mu) / prod mu_i!
    int ell = static_cast<int>(parts.size());
    std::vector<long> mu(ell);
    for (int i = 0; i < ell; ++i) mu[i] = parts[ell - 1 - i] + i;
    Int vand = 1;
    for (int i = 0; i < ell; ++i)
        for (int j = i + 1; j < ell; ++j) vand *= Int(mu[j] - mu[i]);
    Int denom = 1;
    for (int i = 0; i < ell; ++i) denom *= factorial(static_cast<unsigned long>(mu[i]));
    Int num = factorial(static_cast<unsigned long>(n)) * vand;
    Int out;
    mpz_divexact(out.backend().data(), num.backend().data(), denom.backend().data());
    return out;
}

inline Int dim_syt(const Partition& lambda, DimMethod method = DimMethod::Hook) {
    return dim_syt_parts(lambda.parts(), method);
}

// Number of semistandard Young tableaux with entries in {1..m}
// (hook-content formula); zero when length(lambda) > m.
inline Int ssyt_count(const Partition& lambda, int m) {
    if (m < 1) throw DomainError("ssyt_count: m must be >= 1");
    const auto& parts = lambda.parts();
    if (static_cast<int>(parts.size()) > m) return 0;
    if (parts.empty()) return 1;
    std::vector<unsigned long> num;
    for (int i = 0; i < static_cast<int>(parts.size()); ++i)
        for (int j = 0; j < parts[i]; ++j)
            num.push_back(static_cast<unsigned long>(m + j - i));
    Int numerator = detail::product_chunked(num);
    Int denom = detail::product_chunked(detail::hook_lengths(parts));
    Int out;
    mpz_divexact(out.backend().data(), numerator.backend().data(), denom.backend().data());
    return out;
}

// ---------------------------------------------------------------------------
// Schur polynomial evaluation (Jacobi-Trudi determinant)
// ---------------------------------------------------------------------------

namespace detail {

// complete homogeneous symmetric polynomials h_0..h_kmax at the given values
template <typename T>
std::vector<T> complete_homogeneous(const std::vector<T>& xs, int kmax) {
    std::vector<T> h(static_cast<std::size_t>(kmax) + 1, T(0));
    h[0] = T(1);
    for (const T& x : xs)
        for (int k = 1; k <= kmax; ++k) h[k] += x * h[k - 1];
    return h;
}

template <typename T>
T determinant(std::vector<std::vector<T>> a) {
    int n = static_cast<int>(a.size());
    T det(1);
    for (int c = 0; c < n; ++c) {
        int pivot = -1;
        if constexpr (std::is_same_v<T, Real> || std::is_same_v<T, double>) {
            T best(0);
            for (int r = c; r < n; ++r) {
                T m = abs(a[r][c]);
                if (pivot < 0 || m > best) { best = m; pivot = r; }
            }
            if (best == T(0)) return T(0);
        } else {
            for (int r = c; r < n; ++r)
                if (a[r][c] != T(0)) { pivot = r; break; }
            if (pivot < 0) return T(0);
        }
        if (pivot != c) { std::swap(a[pivot], a[c]); det = -det; }
        det *= a[c][c];
        T inv = T(1) / a[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c] == T(0)) continue;
            T f = a[r][c] * inv;
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

} // namespace detail

// s_lambda(x_1..x_k, 0, 0, ...).  Exact for T=Rat, high precision for T=Real.
// Requires x_i >= 0 per the measures this library evaluates.
template <typename T>
T schur_eval(const Partition& lambda, const std::vector<T>& xs) {
    for (const T& x : xs)
        if (x < T(0)) throw DomainError("schur_eval: negative variable");
    int ell = lambda.length();
    if (ell == 0) return T(1);
    if (ell > static_cast<int>(xs.size())) return T(0);
    int kmax = lambda.part(1) + ell;
    auto h = detail::complete_homogeneous(xs, kmax);
    std::vector<std::vector<T>> a(ell, std::vector<T>(ell, T(0)));
    for (int i = 1; i <= ell; ++i)
        for (int j = 1; j <= ell; ++j) {
            int idx = lambda.part(i) - i + j;
            if (idx >= 0) a[i - 1][j - 1] = h[idx];
        }
    return detail::determinant(std::move(a));
}

// ---------------------------------------------------------------------------
// LIS census tables
// ---------------------------------------------------------------------------

// Contiguous table of exact nonnegative counts with an optional full-census
// checksum (n! for permutations, m^n for words).
struct CountTable {
    long lo = 0;
    std::vector<Int> counts;
    std::optional<Int> checksum;

    Int total() const {
        Int t = 0;
        for (const Int& c : counts) t += c;
        return t;
    }

    bool checksum_ok() const { return !checksum || total() == *checksum; }

    Int at(long k) const {
        long i = k - lo;
        if (i < 0 || i >= static_cast<long>(counts.size())) return 0;
        return counts[static_cast<std::size_t>(i)];
    }
};

// ell_{n,k} = #{permutations of [n] with LIS = k} = sum over lambda |- n with
// lambda_1 = k of d_lambda^2, via RSK.
inline CountTable lis_counts(long n, long budget_n = 40) {
    if (n < 1) throw DomainError("lis_counts: n must be >= 1");
    if (n > budget_n)
        throw ResourceError("lis_counts: n=" + std::to_string(n) +
                            " exceeds partition-enumeration budget " + std::to_string(budget_n));
    CountTable t;
    t.lo = 1;
    t.counts.assign(static_cast<std::size_t>(n), Int(0));
    for_each_partition(n, [&](const std::vector<int>& parts) {
        Int d = dim_syt_parts(parts);
        t.counts[static_cast<std::size_t>(parts[0] - 1)] += d * d;
    });
    t.checksum = factorial(static_cast<unsigned long>(n));
    return t;
}

// #{words in [m]^n with longest weakly increasing subsequence = i}
//   = sum over lambda |- n, len(lambda) <= m, lambda_1 = i of
//     d_lambda * ssyt_count(lambda, m), via RSK for words.
inline CountTable word_lis_counts(int m, long n, long budget_n = 60) {
    if (m < 1 || n < 1) throw DomainError("word_lis_counts: m,n must be >= 1");
    if (n > budget_n)
        throw ResourceError("word_lis_counts: n exceeds budget");
    CountTable t;
    t.lo = 1;
    t.counts.assign(static_cast<std::size_t>(n), Int(0));
    for_each_partition(n, [&](const std::vector<int>& parts) {
        Partition lam(parts);
        Int s = ssyt_count(lam, m);
        if (s == 0) return;
        t.counts[static_cast<std::size_t>(parts[0] - 1)] += dim_syt_parts(parts) * s;
    }, m);
    t.checksum = int_pow(Int(m), static_cast<unsigned long>(n));
    return t;
}

} // namespace logcon
