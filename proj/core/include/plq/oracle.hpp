#ifndef PLQ_ORACLE_HPP
#define PLQ_ORACLE_HPP

#include "plq/function.hpp"
#include "plq/types.hpp"

// Reference implementations built on first principles: each query walks the
// whole function, no shared state with the logarithmic or sweep paths. Used
// to cross-check those paths and as the slow baseline in benchmarks.
namespace plq::oracle {

// Legendre-Fenchel conjugate f*(s) = sup_x (s x - f(x)), assembled piece by
// piece from the slope ranges of f. The result is again a valid convex
// function in the same representation (conjugating swaps points with slopes:
// kinks become quadratic-or-affine pieces, linear pieces become kinks,
// bounded domains become affine tails and vice versa).
PlqFunction conjugate(const PlqFunction& f);

// The set {s : f*(s) <= eps - f(xbar) + s xbar} as a closed interval,
// computed by scanning every piece of a freshly built conjugate. Empty when
// xbar lies outside the domain. O(n) per call by construction. Throws
// Error(non_positive_epsilon) unless eps > 0.
Interval eps_sub_reference(const PlqFunction& f, double xbar, double eps);

// Membership test straight from the definition: s is accepted when
// inf_y (f(y) - s y) >= f(xbar) - s xbar - eps - slack, the infimum taken
// piecewise in closed form. Requires finite s and xbar in the domain.
bool is_eps_subgradient(const PlqFunction& f, double xbar, double eps,
                        double s, double slack = 1e-9);

}  // namespace plq::oracle

#endif  // PLQ_ORACLE_HPP
