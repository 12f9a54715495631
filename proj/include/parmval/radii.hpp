#ifndef PARMVAL_RADII_HPP
#define PARMVAL_RADII_HPP

// Radii-polynomial search: given rigorous bounds Y, Z01 = Z0 + Z1 and Z2,
// locate r > 0 with p(r) = Z2 r^2 - (1 - Z01) r + Y < 0 (upper endpoint,
// strict). Success certifies a unique zero of the underlying map within
// distance r of the numerical approximation.

#include "parmval/interval.hpp"

namespace parmval {

struct radii_report {
    bool success = false;
    double r = 0.0;       // first admissible grid point
    double r_max = 0.0;   // largest admissible grid point found
    interval value{0.0};  // polynomial value at r
};

inline interval radii_poly(const interval& Y, const interval& Z01, const interval& Z2,
                           const interval& r) {
    return Z2 * r * r - (interval(1.0) - Z01) * r + Y;
}

// Scan the geometric grid {base * 2^j} with base = max(Y.hi, tiny). Since Z2 >= 0
// the polynomial is convex, so the admissible radii form one interval and the
// scan may stop at the first failure after a success.
inline radii_report find_radius(const interval& Y, const interval& Z01, const interval& Z2) {
    radii_report rep;
    double base = Y.hi();
    if (!(base > 0.0)) base = 1e-300;
    double r = base;
    for (int j = 0; j < 1200 && r < 1e12; ++j, r *= 2.0) {
        interval p = radii_poly(Y, Z01, Z2, interval(r));
        if (p.hi() < 0.0) {
            if (!rep.success) {
                rep.success = true;
                rep.r = r;
                rep.value = p;
            }
            rep.r_max = r;
        } else if (rep.success) {
            break;
        }
    }
    return rep;
}

// Same scan for a product-space problem with one polynomial per component:
// both must be strictly negative at the same r.
inline radii_report find_radius_pair(const interval& Ya, const interval& Z01a, const interval& Z2a,
                                     const interval& Yb, const interval& Z01b, const interval& Z2b) {
    radii_report rep;
    double base = std::max(Ya.hi(), Yb.hi());
    if (!(base > 0.0)) base = 1e-300;
    double r = base;
    for (int j = 0; j < 1200 && r < 1e12; ++j, r *= 2.0) {
        interval pa = radii_poly(Ya, Z01a, Z2a, interval(r));
        interval pb = radii_poly(Yb, Z01b, Z2b, interval(r));
        if (pa.hi() < 0.0 && pb.hi() < 0.0) {
            if (!rep.success) {
                rep.success = true;
                rep.r = r;
                rep.value = max(pa, pb);
            }
            rep.r_max = r;
        } else if (rep.success) {
            break;
        }
    }
    return rep;
}

} // namespace parmval

#endif
