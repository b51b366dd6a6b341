#pragma once

// Brute-force reference implementations used only by the test suite.
// Deliberately naive and independent of the library's formula paths.

#include "logcon/numeric.hpp"
#include "logcon/partitions.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace oracles {

using logcon::Int;
using logcon::Partition;
using logcon::Rat;

// count standard Young tableaux by placing 1..n row-wise with backtracking
inline long syt_count_bruteforce(const Partition& lam) {
    const auto& parts = lam.parts();
    long n = lam.size();
    std::vector<int> fill(parts.size(), 0);
    std::function<long(long)> rec = [&](long placed) -> long {
        if (placed == n) return 1;
        long total = 0;
        for (std::size_t r = 0; r < parts.size(); ++r) {
            if (fill[r] >= parts[r]) continue;
            if (r > 0 && fill[r - 1] <= fill[r]) continue;
            fill[r]++;
            total += rec(placed + 1);
            fill[r]--;
        }
        return total;
    };
    return rec(0);
}

// enumerate semistandard tableaux with entries in {1..m}; calls visit with
// the multiset of entries (as a count vector) for each tableau
template <typename Visit>
void for_each_ssyt(const Partition& lam, int m, Visit visit) {
    const auto& parts = lam.parts();
    int rows = static_cast<int>(parts.size());
    if (rows == 0) { std::vector<int> counts(m, 0); visit(counts); return; }
    std::vector<std::vector<int>> t(rows);
    for (int r = 0; r < rows; ++r) t[r].assign(parts[r], 0);
    std::vector<int> counts(m, 0);
    std::function<void(int, int)> rec = [&](int r, int c) {
        if (r == rows) { visit(counts); return; }
        int nr = r, nc = c + 1;
        if (nc >= parts[r]) { nr = r + 1; nc = 0; }
        int lo = 1;
        if (c > 0) lo = std::max(lo, t[r][c - 1]);          // weak along rows
        if (r > 0) lo = std::max(lo, t[r - 1][c] + 1);       // strict down columns
        for (int v = lo; v <= m; ++v) {
            t[r][c] = v;
            counts[v - 1]++;
            rec(nr, nc);
            counts[v - 1]--;
        }
    };
    rec(0, 0);
}

inline long ssyt_count_bruteforce(const Partition& lam, int m) {
    long n = 0;
    for_each_ssyt(lam, m, [&](const std::vector<int>&) { n++; });
    return n;
}

inline Rat schur_bruteforce(const Partition& lam, const std::vector<Rat>& xs) {
    if (lam.length() > static_cast<int>(xs.size())) return Rat(0);
    Rat total(0);
    for_each_ssyt(lam, static_cast<int>(xs.size()), [&](const std::vector<int>& counts) {
        Rat term(1);
        for (std::size_t i = 0; i < counts.size(); ++i)
            for (int c = 0; c < counts[i]; ++c) term *= xs[i];
        total += term;
    });
    return total;
}

// longest strictly increasing subsequence (patience sorting)
inline int lis_strict(const std::vector<int>& seq) {
    std::vector<int> tails;
    for (int v : seq) {
        auto it = std::lower_bound(tails.begin(), tails.end(), v);
        if (it == tails.end()) tails.push_back(v); else *it = v;
    }
    return static_cast<int>(tails.size());
}

// longest weakly increasing subsequence
inline int lis_weak(const std::vector<int>& seq) {
    std::vector<int> tails;
    for (int v : seq) {
        auto it = std::upper_bound(tails.begin(), tails.end(), v);
        if (it == tails.end()) tails.push_back(v); else *it = v;
    }
    return static_cast<int>(tails.size());
}

inline std::map<int, long> perm_lis_census(int n) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i + 1;
    std::map<int, long> census;
    do {
        census[lis_strict(perm)]++;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return census;
}

inline std::map<int, long> word_lis_census(int m, int n) {
    std::vector<int> w(n, 1);
    std::map<int, long> census;
    for (;;) {
        census[lis_weak(w)]++;
        int i = n - 1;
        while (i >= 0 && w[i] == m) { w[i] = 1; --i; }
        if (i < 0) break;
        w[i]++;
    }
    return census;
}

} // namespace oracles
