#ifndef PLQ_EPSSUB_POINT_HPP
#define PLQ_EPSSUB_POINT_HPP

#include <cstddef>

#include "plq/function.hpp"
#include "plq/types.hpp"

namespace plq {

// The affine function l(s) = eps - f(xbar) + s xbar. A slope s is an
// eps-subgradient of f at xbar exactly when the conjugate satisfies
// f*(s) <= l(s), which turns the endpoint computation into two crossing
// searches against this line.
struct SupportLine {
  double slope = 0.0;      // xbar
  double intercept = 0.0;  // eps - f(xbar)

  double operator()(double s) const { return intercept + slope * s; }
};

// A point of the conjugate sampled through a primal breakpoint: s is a slope
// of f at x, and then f*(s) = ystar = s x - f(x). The conjugate is never
// materialized; the search touches it only through these samples.
struct ConjugatePoint {
  double s = 0.0;
  double ystar = 0.0;
  double x = 0.0;
};

enum class Side { left, right };

// Builds l for (f, xbar, eps). Throws Error(non_positive_epsilon) unless
// 0 < eps < inf, Error(out_of_domain) when f(xbar) is not finite.
SupportLine support_line(const PlqFunction& f, double xbar, double eps);

// Conjugate sample at breakpoint i: s = 2 a_i x_i + b_i taken from row i
// itself, ystar = s x_i - f(x_i). Throws Error(infinite_breakpoint) when
// x_i is not finite.
ConjugatePoint conjugate_point(const PlqFunction& f, std::size_t i);

// The interval [s_lo, s_hi] of all eps-subgradients of f at xbar, in
// O(log n) operations: a dichotomic search over conjugate samples brackets
// each endpoint, then a constant-time crossing solve resolves it. Empty when
// xbar is outside the domain, (-inf, +inf) at a needle point, one endpoint
// infinite when xbar sits on a bounded domain end. Throws
// Error(non_positive_epsilon) unless 0 < eps < inf.
Interval eps_subdifferential(const PlqFunction& f, double xbar, double eps);

// Crossing of the conjugate with `line` inside the bracket made of the
// vertex segment of breakpoint l followed by the conjugate segment of piece
// u (u == l + 1), or of piece l's segment alone over its full slope range
// (u == l). side == left returns the infimum of {s in bracket :
// f*(s) <= line(s)}, side == right the supremum; a bracket endpoint already
// below the line is returned as-is. Throws Error(no_crossing) when the set
// is empty, which callers treat as a search invariant violation.
double intersection(const PlqFunction& f, std::size_t l, std::size_t u,
                    const SupportLine& line, Side side);

}  // namespace plq

#endif  // PLQ_EPSSUB_POINT_HPP
