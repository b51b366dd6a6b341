#pragma once

// Probability mass function on a contiguous window of Z with a certified
// bound on the mass the window truncates away.
//
// Masses are either exact rationals (T=Rat) or 256-bit floats (T=Real) with
// a uniform relative-error bound rel_err.  For truncated families the masses
// are normalized by an upper bound Z_up >= Z, so every reported mass is a
// lower bound on the true mass, ratios inside the window are exact, and
// sum(masses) + residual == 1.

#include "logcon/numeric.hpp"

#include <vector>

namespace logcon {

template <typename T>
struct Pmf {
    long offset = 0;          // index of masses.front()
    std::vector<T> masses;
    double residual = 0.0;    // certified upper bound on unaccounted mass
    bool exact = false;
    double rel_err = 0.0;     // relative error bound on each mass (0 if exact)

    long lo() const { return offset; }
    long hi() const { return offset + static_cast<long>(masses.size()) - 1; }

    T at(long k) const {
        long i = k - offset;
        if (i < 0 || i >= static_cast<long>(masses.size())) return T(0);
        return masses[static_cast<std::size_t>(i)];
    }

    T window_total() const {
        T s(0);
        for (const T& m : masses) s += m;
        return s;
    }

    double mean() const {
        double s = 0;
        for (std::size_t i = 0; i < masses.size(); ++i)
            s += to_double(masses[i]) * static_cast<double>(offset + static_cast<long>(i));
        return s;
    }

    double variance() const {
        double mu = mean(), s = 0;
        for (std::size_t i = 0; i < masses.size(); ++i) {
            double x = static_cast<double>(offset + static_cast<long>(i)) - mu;
            s += to_double(masses[i]) * x * x;
        }
        return s;
    }

    // drops exact-zero margins at both ends of the window
    void trim() {
        std::size_t a = 0, b = masses.size();
        while (a < b && masses[a] == T(0)) ++a;
        while (b > a && masses[b - 1] == T(0)) --b;
        if (a > 0 || b < masses.size()) {
            masses = std::vector<T>(masses.begin() + static_cast<long>(a),
                                    masses.begin() + static_cast<long>(b));
            offset += static_cast<long>(a);
        }
    }
};

using RatPmf = Pmf<Rat>;
using RealPmf = Pmf<Real>;

inline RealPmf to_real_pmf(const RatPmf& p) {
    RealPmf r;
    r.offset = p.offset;
    r.residual = p.residual;
    r.exact = false;
    r.rel_err = 1e-70;  // conversion rounding only
    r.masses.reserve(p.masses.size());
    for (const Rat& m : p.masses) r.masses.push_back(to_real(m));
    return r;
}

// L1 distance between the windows (ignores residuals)
template <typename T>
double total_variation(const Pmf<T>& a, const Pmf<T>& b) {
    long lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    T s(0);
    for (long k = lo; k <= hi; ++k) {
        T d = a.at(k) - b.at(k);
        if (d < T(0)) d = -d;
        s += d;
    }
    return 0.5 * to_double(s);
}

template <typename T>
Pmf<T> convolve(const Pmf<T>& a, const Pmf<T>& b) {
    Pmf<T> c;
    c.offset = a.offset + b.offset;
    c.masses.assign(a.masses.size() + b.masses.size() - 1, T(0));
    for (std::size_t i = 0; i < a.masses.size(); ++i)
        for (std::size_t j = 0; j < b.masses.size(); ++j)
            c.masses[i + j] += a.masses[i] * b.masses[j];
    c.residual = 1.0 - (1.0 - a.residual) * (1.0 - b.residual);
    c.exact = a.exact && b.exact;
    c.rel_err = a.rel_err + b.rel_err;
    return c;
}

template <typename T>
double max_pointwise_gap(const Pmf<T>& a, const Pmf<T>& b) {
    long lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    double g = 0;
    for (long k = lo; k <= hi; ++k) {
        double d = std::abs(to_double(a.at(k)) - to_double(b.at(k)));
        if (d > g) g = d;
    }
    return g;
}

} // namespace logcon
