#ifndef PLQ_FUNCTION_HPP
#define PLQ_FUNCTION_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "plq/types.hpp"

namespace plq {

// One matrix row [x | a b c]: the piece a t^2 + b t + c valid up to
// breakpoint x. Row i of a function covers (x_{i-1}, x_i]; the first row
// covers (-inf, x_0] and the last row carries x = +inf (except for the
// single-row needle encoding, whose only breakpoint is the needle point).
struct PlqPiece {
  double x = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double value(double t) const { return (a * t + b) * t + c; }
  double slope(double t) const { return 2.0 * a * t + b; }
  bool is_infinite() const { return c == kInf; }
  bool is_linear() const { return a == 0.0; }
};

// A convex piecewise linear-quadratic function, immutable once validated.
// Construction goes through validate(), which enforces the representation
// invariants (ordering, convexity, continuity, infinity conventions) and
// freezes the tolerance policy used by every later comparison. All methods
// are const and safe to call concurrently.
class PlqFunction {
 public:
  // Checks the row matrix and returns the function, or throws Error with a
  // code from {not_sorted, non_convex_piece, slope_decreasing, discontinuous,
  // bad_infinity_convention, empty_input}.
  static PlqFunction validate(std::vector<PlqPiece> rows,
                              const Tolerance& tol = Tolerance{});

  std::size_t piece_count() const { return rows_.size(); }
  std::size_t last_index() const { return rows_.size() - 1; }
  const PlqPiece& piece(std::size_t i) const { return rows_[i]; }
  const std::vector<PlqPiece>& rows() const { return rows_; }
  double breakpoint(std::size_t i) const { return rows_[i].x; }
  const Tolerance& tolerance() const { return tol_; }

  Domain domain() const { return domain_; }
  // Single finite row with a = b = 0: the indicator of a point plus a
  // constant. Many operations special-case it.
  bool is_needle() const { return needle_; }
  double needle_point() const { return rows_[0].x; }

  // Total on the reals: +inf outside the domain. At a closed domain endpoint
  // whose covering row is an infinity row, the adjacent finite piece's value
  // is returned (the function is lower semicontinuous).
  double eval(double x) const;

  // Smallest i with x <= x_i, so a breakpoint belongs to the piece ending at
  // it. Requires x in the domain; throws Error(out_of_domain) otherwise.
  std::size_t piece_index(double x) const;

  // Exact subdifferential as a closed interval; empty outside the domain,
  // (-inf, +inf) at a needle point, one-sided infinite at domain endpoints.
  Interval subdifferential(double x) const;

  // h(x) = f(-x). Exact: coefficients are negated/reordered, never recomputed.
  PlqFunction reflect() const;

  // Slope of piece i at its own breakpoint, 2 a_i x_i + b_i.
  // Throws Error(infinite_breakpoint) when x_i is not finite.
  double breakpoint_slope(std::size_t i) const;

  // One-sided slopes at breakpoint i: left from piece i, right from piece
  // i+1; -inf / +inf when the adjacent piece is an infinity piece.
  double left_slope_at(std::size_t i) const;
  double right_slope_at(std::size_t i) const;

  // f(x_i) through the adjacent finite piece; finite for every breakpoint of
  // a valid function.
  double value_at_breakpoint(std::size_t i) const;

  // Index of the first/last finite piece (0/n unless an end carries c=+inf).
  std::size_t first_finite_piece() const { return first_finite_; }
  std::size_t last_finite_piece() const { return last_finite_; }

 private:
  PlqFunction(std::vector<PlqPiece> rows, Tolerance tol);

  // Smallest i with x <= x_i; total (last breakpoint is +inf or the function
  // is a needle, in which case 0 is returned for every x).
  std::size_t locate(double x) const;

  std::vector<PlqPiece> rows_;
  Tolerance tol_;
  Domain domain_;
  bool needle_ = false;
  std::size_t first_finite_ = 0;
  std::size_t last_finite_ = 0;
};

// Deterministic generator for test and benchmark corpora: `pieces` rows over
// the whole real line, alternating quadratic (curvature in [0.1, 2]) and
// linear pieces, breakpoint gaps in [0.5, 1.5], slopes nondecreasing with a
// mix of smooth and kinked joints. Same (pieces, seed) gives the same
// function on every run and platform.
PlqFunction generate_convex_plq(std::size_t pieces, std::uint64_t seed);

}  // namespace plq

#endif  // PLQ_FUNCTION_HPP
