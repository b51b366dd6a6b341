#pragma once

// Schur measures P(lambda) ~ s_lambda(a) s_lambda(b) for nonnegative finite
// specializations, their one-dimensional marginals with exact residuals from
// the closed-form normalizer Z = prod (1 - a_i b_j)^{-1}, and the midpoint
// product inequality s_lambda(a) s_mu(a) <= s_theta(a) s_phi(a) at
// theta = floor((lambda+mu)/2), phi = ceil((lambda+mu)/2).

#include "logcon/errors.hpp"
#include "logcon/partitions.hpp"
#include "logcon/pmf.hpp"

#include <algorithm>
#include <vector>

namespace logcon {

struct Specialization {
    std::vector<Rat> a, b;

    void validate() const {
        if (a.empty() || b.empty()) throw DomainError("Specialization: empty variable list");
        Rat amax(0), bmax(0);
        for (const Rat& v : a) {
            if (v < 0) throw DomainError("Specialization: negative a value");
            amax = std::max(amax, v);
        }
        for (const Rat& v : b) {
            if (v < 0) throw DomainError("Specialization: negative b value");
            bmax = std::max(bmax, v);
        }
        if (!(amax * bmax < 1))
            throw DomainError("Specialization: needs max(a) * max(b) < 1 to normalize");
    }
};

// Cauchy product form of the normalizer
inline Rat schur_normalizer(const Specialization& s) {
    Rat z(1);
    for (const Rat& x : s.a)
        for (const Rat& y : s.b) z /= (Rat(1) - x * y);
    return z;
}

struct SchurTrunc {
    double eps = 1e-12;
    long max_size = 600;       // largest |lambda| level
    unsigned long long max_shapes = 20000000ULL;
};

// pmf of lambda_i under the Schur measure.  Masses are exact true values
// (the normalizer is closed-form); the residual is exactly 1 - acc/Z.
inline RatPmf schur_marginal_pmf(const Specialization& s, int i,
                                 const SchurTrunc& trunc = {}) {
    s.validate();
    if (i < 1) throw DomainError("schur_marginal_pmf: row index >= 1");
    int maxlen = static_cast<int>(std::min(s.a.size(), s.b.size()));
    Rat z = schur_normalizer(s);
    std::vector<Rat> acc;
    Rat total(0);
    unsigned long long shapes = 0;
    double resid = 1.0;
    bool closed = false;
    for (long d = 0; d <= trunc.max_size; ++d) {
        for_each_partition(d, [&](const std::vector<int>& parts) {
            ++shapes;
            Partition lam(parts);
            Rat va = schur_eval<Rat>(lam, s.a);
            if (va == 0) return;
            Rat vb = schur_eval<Rat>(lam, s.b);
            if (vb == 0) return;
            Rat mass = va * vb / z;
            long li = lam.part(i);
            if (static_cast<long>(acc.size()) <= li) acc.resize(static_cast<std::size_t>(li) + 1, Rat(0));
            acc[static_cast<std::size_t>(li)] += mass;
            total += mass;
        }, maxlen);
        if (shapes > trunc.max_shapes)
            throw ResourceError("schur_marginal_pmf: shape budget exceeded at size " +
                                std::to_string(d));
        resid = to_double(Rat(1) - total);
        if (resid < trunc.eps) { closed = true; break; }
    }
    if (!closed)
        throw ResourceError("schur_marginal_pmf: max size reached before residual target");
    RatPmf p;
    p.offset = 0;
    p.masses = std::move(acc);
    p.residual = resid;
    p.exact = true;
    p.trim();
    return p;
}

// componentwise floor/ceil midpoints of two partitions, zero padded
inline std::pair<Partition, Partition> partition_midpoints(const Partition& lam,
                                                           const Partition& mu) {
    int len = std::max(lam.length(), mu.length());
    std::vector<int> th, ph;
    for (int i = 1; i <= len; ++i) {
        int s = lam.part(i) + mu.part(i);
        int f = s / 2;
        int c = s - f;
        if (f > 0) th.push_back(f);
        if (c > 0) ph.push_back(c);
    }
    // weakly decreasing by construction; Partition() revalidates
    return {Partition(std::move(th)), Partition(std::move(ph))};
}

struct OkounkovCheck {
    Rat lhs;  // s_lambda(a) s_mu(a)
    Rat rhs;  // s_theta(a) s_phi(a)
    bool ok = false;
    Partition theta, phi;
};

inline OkounkovCheck okounkov_check(const Partition& lam, const Partition& mu,
                                    const std::vector<Rat>& a) {
    OkounkovCheck out;
    auto [th, ph] = partition_midpoints(lam, mu);
    out.theta = th;
    out.phi = ph;
    out.lhs = schur_eval<Rat>(lam, a) * schur_eval<Rat>(mu, a);
    out.rhs = schur_eval<Rat>(th, a) * schur_eval<Rat>(ph, a);
    out.ok = (out.lhs <= out.rhs);
    return out;
}

} // namespace logcon
