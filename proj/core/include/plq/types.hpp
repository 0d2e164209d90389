#ifndef PLQ_TYPES_HPP
#define PLQ_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <limits>

namespace plq {

// Extended reals are plain doubles drawing on the IEEE infinities, which
// already order totally against every finite value. NaN is never a legal
// field value in this library; validation rejects it at the boundary.
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline bool is_finite(double v) { return std::isfinite(v); }

// Shared comparison policy: an absolute floor plus a relative term scaled by
// the magnitude of the quantities compared. One instance travels with each
// validated function so every downstream operation applies the same slack.
struct Tolerance {
  double abs_floor = 1e-12;
  double rel = 1e-9;

  double gap(double scale) const { return abs_floor + rel * std::abs(scale); }

  bool close(double a, double b, double scale) const {
    return std::abs(a - b) <= gap(scale);
  }
  // a <= b up to slack at the given scale.
  bool leq(double a, double b, double scale) const {
    return a <= b + gap(scale);
  }
};

// Closed interval of extended reals. `empty` is a distinct state, not an
// encoding trick: [lo, hi] with lo <= hi is nonempty even when degenerate.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;

  static Interval closed(double lo, double hi) { return {lo, hi, false}; }
  static Interval none() { return {}; }

  bool contains(double s) const { return !empty && lo <= s && s <= hi; }
  bool is_empty() const { return empty; }
};

// Effective domain [lo, hi]; unbounded sides are +-infinity. The domain of a
// valid function is the closure of its finite-value set, hence always closed.
struct Domain {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool is_singleton() const { return lo == hi; }
  bool bounded_below() const { return is_finite(lo); }
  bool bounded_above() const { return is_finite(hi); }
};

}  // namespace plq

#endif  // PLQ_TYPES_HPP
