#pragma once

// Internal 1-D root finding and maximisation helpers.

#include <cmath>
#include <cstdint>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>

#include "fdde/errors.hpp"

namespace fdde::detail {

/// Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign (or one be zero).
/// Refined until the bracket is narrower than `tol`.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double tol) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw NoRootError("bracketed_root: no sign change on the bracket");
    }
    std::uintmax_t max_iter = 200;
    auto narrow = [tol](double l, double h) { return std::abs(h - l) <= tol; };
    const auto [l, h] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, narrow, max_iter);
    return 0.5 * (l + h);
}

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace fdde::detail
