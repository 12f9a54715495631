#ifndef PARMVAL_INTERVAL_HPP
#define PARMVAL_INTERVAL_HPP

// Rigorous interval scalar. Endpoint rounding uses error-free transformations
// (TwoSum / fma residuals) in the default round-to-nearest mode: each endpoint
// is nudged one ulp outward only when the operation actually rounded, so exact
// operations stay exact and no rounding-mode switching is needed.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parmval {

class interval_error : public std::runtime_error {
public:
    explicit interval_error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline double next_up(double x) {
    if (std::isnan(x)) throw interval_error("next_up: NaN");
    if (x == std::numeric_limits<double>::infinity()) return x;
    if (x == -std::numeric_limits<double>::infinity()) return -std::numeric_limits<double>::max();
    if (x == 0.0) return std::numeric_limits<double>::denorm_min();
    auto b = std::bit_cast<std::uint64_t>(x);
    if (x > 0.0) ++b; else --b;
    return std::bit_cast<double>(b);
}

inline double next_down(double x) { return -next_up(-x); }

// exact error of s = fl(a+b); requires round-to-nearest and finite s
inline double two_sum_err(double a, double b, double s) {
    double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

// round the nearest-mode result r with exact residual err (true = r + err)
// toward -inf / +inf
inline double dir_down(double r, double err) {
    if (!std::isfinite(r)) return (r > 0) ? std::numeric_limits<double>::max() : r;
    return (err < 0.0) ? next_down(r) : r;
}

inline double dir_up(double r, double err) {
    if (!std::isfinite(r)) return (r < 0) ? -std::numeric_limits<double>::max() : r;
    return (err > 0.0) ? next_up(r) : r;
}

inline double add_down(double a, double b) {
    double s = a + b;
    if (!std::isfinite(s)) return dir_down(s, 0.0);
    return dir_down(s, two_sum_err(a, b, s));
}

inline double add_up(double a, double b) {
    double s = a + b;
    if (!std::isfinite(s)) return dir_up(s, 0.0);
    return dir_up(s, two_sum_err(a, b, s));
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

// below this magnitude the fma residual of a product may itself be inexact
inline constexpr double kProdUnderflow = 0x1p-969;

inline double mul_down(double a, double b) {
    double p = a * b;
    if (!std::isfinite(p)) return dir_down(p, 0.0);
    if (p == 0.0) {
        if (a == 0.0 || b == 0.0) return p; // exact zero
        return std::signbit(p) ? -std::numeric_limits<double>::denorm_min() : 0.0;
    }
    if (std::abs(p) < kProdUnderflow) return next_down(p);
    return dir_down(p, std::fma(a, b, -p));
}

inline double mul_up(double a, double b) {
    double p = a * b;
    if (!std::isfinite(p)) return dir_up(p, 0.0);
    if (p == 0.0) {
        if (a == 0.0 || b == 0.0) return p;
        return std::signbit(p) ? -0.0 : std::numeric_limits<double>::denorm_min();
    }
    if (std::abs(p) < kProdUnderflow) return next_up(p);
    return dir_up(p, std::fma(a, b, -p));
}

// sign of the true quotient error: a/b - q has the sign of (a - q*b)/b
inline double div_down(double a, double b) {
    double q = a / b;
    if (a == 0.0) return q; // exact zero
    if (!std::isfinite(q)) return dir_down(q, 0.0);
    if (std::abs(q) < kProdUnderflow || std::abs(a) < kProdUnderflow) return next_down(q);
    double r = std::fma(q, b, -a); // q*b - a
    if (r == 0.0) return q;
    bool true_above = (r < 0.0) == (b > 0.0);
    return true_above ? q : next_down(q);
}

inline double div_up(double a, double b) {
    double q = a / b;
    if (a == 0.0) return q;
    if (!std::isfinite(q)) return dir_up(q, 0.0);
    if (std::abs(q) < kProdUnderflow || std::abs(a) < kProdUnderflow) return next_up(q);
    double r = std::fma(q, b, -a);
    if (r == 0.0) return q;
    bool true_above = (r < 0.0) == (b > 0.0);
    return true_above ? next_up(q) : q;
}

} // namespace detail

class interval {
    double lo_ = 0.0;
    double hi_ = 0.0;

public:
    interval() = default;

    explicit interval(double x) : lo_(x), hi_(x) {
        if (!std::isfinite(x)) throw interval_error("interval: non-finite point");
    }

    interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (std::isnan(lo) || std::isnan(hi) || lo > hi)
            throw interval_error("interval: invalid endpoints");
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double mid() const { return 0.5 * (lo_ + hi_); }
    double width() const { return hi_ - lo_; }
    // sup over the interval of |x|; exact
    double mag() const { return std::max(std::abs(lo_), std::abs(hi_)); }
    // inf over the interval of |x|; exact
    double mig() const {
        if (lo_ <= 0.0 && 0.0 <= hi_) return 0.0;
        return std::min(std::abs(lo_), std::abs(hi_));
    }

    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
    bool is_degenerate() const { return lo_ == hi_; }
    bool certainly_negative() const { return hi_ < 0.0; }
    bool certainly_positive() const { return lo_ > 0.0; }

    static interval hull(const interval& a, const interval& b) {
        return interval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
    }

    friend interval operator-(const interval& x) { return interval(-x.hi_, -x.lo_); }

    friend interval operator+(const interval& x, const interval& y) {
        return interval(detail::add_down(x.lo_, y.lo_), detail::add_up(x.hi_, y.hi_));
    }

    friend interval operator-(const interval& x, const interval& y) {
        return interval(detail::sub_down(x.lo_, y.hi_), detail::sub_up(x.hi_, y.lo_));
    }

    friend interval operator*(const interval& x, const interval& y) {
        using namespace detail;
        double lo = std::min(std::min(mul_down(x.lo_, y.lo_), mul_down(x.lo_, y.hi_)),
                             std::min(mul_down(x.hi_, y.lo_), mul_down(x.hi_, y.hi_)));
        double hi = std::max(std::max(mul_up(x.lo_, y.lo_), mul_up(x.lo_, y.hi_)),
                             std::max(mul_up(x.hi_, y.lo_), mul_up(x.hi_, y.hi_)));
        return interval(lo, hi);
    }

    friend interval operator/(const interval& x, const interval& y) {
        using namespace detail;
        if (y.contains_zero()) throw interval_error("interval division by interval containing 0");
        double lo = std::min(std::min(div_down(x.lo_, y.lo_), div_down(x.lo_, y.hi_)),
                             std::min(div_down(x.hi_, y.lo_), div_down(x.hi_, y.hi_)));
        double hi = std::max(std::max(div_up(x.lo_, y.lo_), div_up(x.lo_, y.hi_)),
                             std::max(div_up(x.hi_, y.lo_), div_up(x.hi_, y.hi_)));
        return interval(lo, hi);
    }

    interval& operator+=(const interval& o) { return *this = *this + o; }
    interval& operator-=(const interval& o) { return *this = *this - o; }
    interval& operator*=(const interval& o) { return *this = *this * o; }
    interval& operator/=(const interval& o) { return *this = *this / o; }

    friend bool operator==(const interval& a, const interval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    // enclosing parse: the string denotes a real number; result contains it
    static interval enclose_decimal(std::string_view s) {
        double x = parse_double(s);
        if (!std::isfinite(x)) throw interval_error("enclose_decimal: non-finite value");
        return interval(detail::next_down(x), detail::next_up(x));
    }

    // exact parse: the string denotes a binary64 endpoint (round-trip form)
    static double parse_endpoint(std::string_view s) { return parse_double(s); }

private:
    static double parse_double(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw interval_error("cannot parse decimal: '" + std::string(s) + "'");
        return x;
    }
};

// interval whose upper endpoint bounds |x| for every x in the argument
inline interval mag(const interval& x) { return interval(x.mag()); }

// componentwise maximum: the tightest enclosure of max(x, y) over both intervals
inline interval max(const interval& x, const interval& y) {
    return interval(std::max(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

inline interval operator+(const interval& x, double y) { return x + interval(y); }
inline interval operator+(double x, const interval& y) { return interval(x) + y; }
inline interval operator-(const interval& x, double y) { return x - interval(y); }
inline interval operator-(double x, const interval& y) { return interval(x) - y; }
inline interval operator*(const interval& x, double y) { return x * interval(y); }
inline interval operator*(double x, const interval& y) { return interval(x) * y; }
inline interval operator/(const interval& x, double y) { return x / interval(y); }
inline interval operator/(double x, const interval& y) { return interval(x) / y; }

inline interval sqrt(const interval& x) {
    using namespace detail;
    if (x.lo() < 0.0) throw interval_error("sqrt of interval with negative part");
    auto dir = [](double v) {
        double s = std::sqrt(v);
        double r = std::fma(s, s, -v); // sign of s*s - v is reliable
        return std::pair<double, double>{r > 0.0 ? next_down(s) : s,
                                         r < 0.0 ? next_up(s) : s};
    };
    return interval(dir(x.lo()).first, dir(x.hi()).second);
}

// libm exp is faithful, not correctly rounded: two ulps outward
inline interval exp(const interval& x) {
    using namespace detail;
    double lo = next_down(next_down(std::exp(x.lo())));
    double hi = next_up(next_up(std::exp(x.hi())));
    if (lo < 0.0) lo = 0.0;
    return interval(lo, hi);
}

// x^n by repeated multiplication; even powers sharpened through |x|
inline interval pow_int(const interval& x, unsigned n) {
    if (n == 0) return interval(1.0);
    interval base = x;
    if (n % 2 == 0) {
        double m = x.mig(), M = x.mag();
        base = interval(m, M);
        interval r(1.0);
        for (unsigned i = 0; i < n; ++i) r *= base;
        return r;
    }
    interval r(1.0);
    for (unsigned i = 0; i < n; ++i) r *= base;
    return r;
}

// shortest decimal that round-trips to exactly this double
inline std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string to_string(const interval& x) {
    return "[" + format_double(x.lo()) + ", " + format_double(x.hi()) + "]";
}

} // namespace parmval

#endif
