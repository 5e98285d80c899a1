/*
 * interval.hpp
 *
 * Scalar interval arithmetic for the natural interval extension of
 * expression systems. Results are widened outward by one ulp per
 * operation so double-precision point evaluations stay enclosed.
 */

#ifndef RCIS_INTERVAL_HPP_
#define RCIS_INTERVAL_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcis {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}
  Interval(double l, double h) : lo(l), hi(h) {
    if (!(l <= h)) throw std::invalid_argument("Interval: lo > hi");
  }

  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
};

namespace detail {
inline double down(double v) {
  return std::nextafter(v, -std::numeric_limits<double>::infinity());
}
inline double up(double v) {
  return std::nextafter(v, std::numeric_limits<double>::infinity());
}
inline Interval widened(double lo, double hi) {
  return Interval(down(lo), up(hi));
}
}  // namespace detail

inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator+(const Interval& a, const Interval& b) {
  return detail::widened(a.lo + b.lo, a.hi + b.hi);
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return detail::widened(a.lo - b.hi, a.hi - b.lo);
}

inline Interval operator*(const Interval& a, const Interval& b) {
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return detail::widened(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

inline Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo <= 0.0 && b.hi >= 0.0)
    throw std::domain_error("interval division by an interval containing 0");
  const double p1 = a.lo / b.lo, p2 = a.lo / b.hi;
  const double p3 = a.hi / b.lo, p4 = a.hi / b.hi;
  return detail::widened(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

inline Interval sin(const Interval& a) {
  if (a.width() >= 2.0 * M_PI) return Interval(-1.0, 1.0);
  double lo = std::min(std::sin(a.lo), std::sin(a.hi));
  double hi = std::max(std::sin(a.lo), std::sin(a.hi));
  /* extrema at pi/2 + k*pi */
  const double k_lo = std::ceil((a.lo - M_PI / 2.0) / M_PI);
  const double k_hi = std::floor((a.hi - M_PI / 2.0) / M_PI);
  for (double k = k_lo; k <= k_hi; k += 1.0) {
    if (static_cast<long long>(k) % 2 == 0)
      hi = 1.0;
    else
      lo = -1.0;
  }
  return detail::widened(std::max(lo, -1.0), std::min(hi, 1.0));
}

inline Interval cos(const Interval& a) {
  return sin(a + Interval(M_PI / 2.0));
}

inline Interval exp(const Interval& a) {
  return detail::widened(std::exp(a.lo), std::exp(a.hi));
}

inline Interval tanh(const Interval& a) {
  return detail::widened(std::tanh(a.lo), std::tanh(a.hi));
}

inline Interval abs(const Interval& a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return Interval(0.0, std::max(-a.lo, a.hi));
}

inline Interval sqrt(const Interval& a) {
  if (a.lo < 0.0)
    throw std::domain_error("interval sqrt of a partially negative interval");
  return detail::widened(std::sqrt(a.lo), std::sqrt(a.hi));
}

inline Interval min(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}

inline Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

/* x^p for integer p by repeated monotone/even-power rules */
inline Interval pow_int(const Interval& a, long long p) {
  if (p == 0) return Interval(1.0);
  if (p < 0) return Interval(1.0) / pow_int(a, -p);
  const double plo = std::pow(a.lo, static_cast<double>(p));
  const double phi = std::pow(a.hi, static_cast<double>(p));
  if (p % 2 != 0) return detail::widened(std::min(plo, phi), std::max(plo, phi));
  if (a.lo >= 0.0) return detail::widened(plo, phi);
  if (a.hi <= 0.0) return detail::widened(phi, plo);
  return detail::widened(0.0, std::max(plo, phi));
}

/* x^y; general exponents require a strictly positive base */
inline Interval pow(const Interval& a, const Interval& b) {
  if (b.lo == b.hi && b.lo == std::floor(b.lo) && std::abs(b.lo) < 1e15)
    return pow_int(a, static_cast<long long>(b.lo));
  if (a.lo <= 0.0)
    throw std::domain_error(
        "interval pow: non-integer exponent needs a positive base");
  const double c[4] = {std::pow(a.lo, b.lo), std::pow(a.lo, b.hi),
                       std::pow(a.hi, b.lo), std::pow(a.hi, b.hi)};
  return detail::widened(std::min({c[0], c[1], c[2], c[3]}),
                         std::max({c[0], c[1], c[2], c[3]}));
}

}  // namespace rcis

#endif  // RCIS_INTERVAL_HPP_
