#pragma once

// Four-function discrete Brunn-Minkowski verifier on a finite box in Z^d:
// checks  f(x) g(y) <= h(floor(s x + (1-s) y)) k(ceil((1-s) x + s y))
// for all x, y (exterior treated as zero) and the corresponding sum
// inequality (sum f)(sum g) <= (sum h)(sum k).

#include "logcon/errors.hpp"
#include "logcon/numeric.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace logcon {

template <typename T>
struct BoxTable {
    std::vector<long> lo;    // per-axis lower corner
    std::vector<long> dims;  // per-axis extents
    std::vector<T> data;     // row-major, dense

    BoxTable() = default;
    BoxTable(std::vector<long> lo_, std::vector<long> dims_)
        : lo(std::move(lo_)), dims(std::move(dims_)) {
        std::size_t total = 1;
        for (long d : dims) {
            if (d <= 0) throw DomainError("BoxTable: empty axis");
            total *= static_cast<std::size_t>(d);
        }
        data.assign(total, T(0));
    }

    int dim() const { return static_cast<int>(dims.size()); }

    bool contains(const std::vector<long>& pt) const {
        for (int c = 0; c < dim(); ++c)
            if (pt[c] < lo[c] || pt[c] >= lo[c] + dims[c]) return false;
        return true;
    }

    std::size_t index(const std::vector<long>& pt) const {
        std::size_t idx = 0;
        for (int c = 0; c < dim(); ++c)
            idx = idx * static_cast<std::size_t>(dims[c]) +
                  static_cast<std::size_t>(pt[c] - lo[c]);
        return idx;
    }

    T at(const std::vector<long>& pt) const {
        if (!contains(pt)) return T(0);
        return data[index(pt)];
    }

    void set(const std::vector<long>& pt, T v) {
        if (!contains(pt)) throw DomainError("BoxTable::set: point outside box");
        data[index(pt)] = std::move(v);
    }

    T sum() const {
        T s(0);
        for (const T& v : data) s += v;
        return s;
    }

    std::vector<std::pair<std::vector<long>, T>> support() const {
        std::vector<std::pair<std::vector<long>, T>> out;
        std::vector<long> pt(lo);
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data[i] != T(0)) out.emplace_back(pt, data[i]);
            // odometer increment
            for (int c = dim() - 1; c >= 0; --c) {
                if (++pt[c] < lo[c] + dims[c]) break;
                pt[c] = lo[c];
            }
        }
        return out;
    }
};

struct HksResult {
    bool pointwise_ok = true;
    bool sum_ok = true;
    std::optional<std::pair<std::vector<long>, std::vector<long>>> witness;
};

namespace detail {

inline long floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.backend().data(), a.backend().data(), b.backend().data());
    return q.convert_to<long>();
}

inline long ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.backend().data(), a.backend().data(), b.backend().data());
    return q.convert_to<long>();
}

} // namespace detail

template <typename T>
HksResult hks_verify(const BoxTable<T>& f, const BoxTable<T>& g,
                     const BoxTable<T>& h, const BoxTable<T>& k,
                     const Rat& s = Rat(1, 2)) {
    if (s < 0 || s > 1) throw DomainError("hks_verify: s must lie in [0,1]");
    const int d = f.dim();
    if (g.dim() != d || h.dim() != d || k.dim() != d)
        throw DomainError("hks_verify: dimension mismatch");

    Int p = numerator(s), q = denominator(s);
    Int pc = q - p;  // (1-s) numerator over the same denominator

    HksResult res;
    auto fs = f.support();
    auto gs = g.support();
    std::vector<long> mid_floor(d), mid_ceil(d);
    for (const auto& [x, fx] : fs) {
        for (const auto& [y, gy] : gs) {
            for (int c = 0; c < d; ++c) {
                Int fl = p * x[c] + pc * y[c];   // q * (s x + (1-s) y)
                Int ce = pc * x[c] + p * y[c];   // q * ((1-s) x + s y)
                mid_floor[c] = detail::floor_div(fl, q);
                mid_ceil[c] = detail::ceil_div(ce, q);
            }
            if (fx * gy > h.at(mid_floor) * k.at(mid_ceil)) {
                res.pointwise_ok = false;
                if (!res.witness) res.witness = std::make_pair(x, y);
            }
        }
    }
    res.sum_ok = (f.sum() * g.sum() <= h.sum() * k.sum());
    return res;
}

} // namespace logcon
