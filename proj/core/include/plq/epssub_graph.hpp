#ifndef PLQ_EPSSUB_GRAPH_HPP
#define PLQ_EPSSUB_GRAPH_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plq/function.hpp"
#include "plq/types.hpp"

namespace plq {

// One row [x | t it ib v] of the lower-bound table: it describes
// g(xbar) = inf of the eps-subgradient set for every xbar in the row's
// validity interval (previous row's x, x].
//   t = 1: the supporting line is tangent to quadratic piece `it`, xbar lies
//          in piece `ib`; v unused.
//   t = 2: the supporting line pivots on breakpoint `it`, xbar lies in piece
//          `ib`; v unused.
//   t = 3: g is constant v on the interval; marker rows (domain ends, the
//          needle encoding) carry v = NaN or -inf and indices as noted below.
// Indices are 0-based in memory and -1 when irrelevant; the CSV form is
// 1-based with `nan` for irrelevant entries. Reading an irrelevant field
// through the checked accessors asserts.
struct LowerBoundRow {
  double x = 0.0;
  int t = 0;
  std::int64_t it = -1;
  std::int64_t ib = -1;
  double v = kNaN;

  std::size_t tangent_index() const {
    assert(it >= 0);
    return static_cast<std::size_t>(it);
  }
  std::size_t containing_piece() const {
    assert(ib >= 0);
    return static_cast<std::size_t>(ib);
  }
  double constant_value() const {
    assert(!std::isnan(v));
    return v;
  }
};

// Operation counts of one build_lower_table run; deterministic, used to
// check the linear growth of the sweep without timers.
struct BuildStats {
  std::size_t loop_iterations = 0;
  std::size_t xb_solves = 0;
  std::size_t rows = 0;
};

// Closed form of one table row (see classify): g is constant, a rational
// function (affine-over-affine around the pivot), or linear minus the square
// root of a quadratic.
struct ConstantForm {
  double v = 0.0;

  double operator()(double) const { return v; }
};
struct RationalForm {
  double pole = 0.0;  // pivot abscissa
  double a = 0.0, b = 0.0, c = 0.0;

  double operator()(double x) const {
    return ((a * x + b) * x + c) / (x - pole);
  }
};
struct SqrtQuadraticForm {
  double la = 0.0, lb = 0.0;      // linear part la x + lb
  double qa = 0.0, qb = 0.0, qc = 0.0;  // under the root
  int sign = -1;

  double operator()(double x) const {
    const double q = (qa * x + qb) * x + qc;
    return la * x + lb + sign * std::sqrt(q < 0.0 ? 0.0 : q);
  }
};
using PieceForm = std::variant<ConstantForm, RationalForm, SqrtQuadraticForm>;

// The lower half of the graph of the eps-subdifferential: rows with strictly
// increasing x covering (-inf, +inf], the last row at x = +inf. Immutable
// after build; evaluations are pure and freely concurrent.
class LowerBoundTable {
 public:
  // Reassembles a table from externally stored rows (after CSV round-trips).
  // Rows are trusted structurally but must be strictly increasing in x.
  static LowerBoundTable from_rows(PlqFunction f, double eps,
                                   std::vector<LowerBoundRow> rows);

  const PlqFunction& function() const { return f_; }
  double eps() const { return eps_; }
  const std::vector<LowerBoundRow>& rows() const { return rows_; }
  const BuildStats& stats() const { return stats_; }

  // g(xbar) in O(log n): empty outside the domain, -inf at a finite left
  // domain end and at a needle point, else the row recipe.
  std::optional<double> eval(double xbar) const;

  // Same values as eval at each point of an ascending grid, in one merged
  // pass over grid and rows. Throws Error(unsorted_input) if xs decreases.
  std::vector<std::optional<double>> eval_grid(
      const std::vector<double>& xs) const;

  // Closed form of row k. Marker rows classify as Constant(NaN).
  PieceForm classify(std::size_t k) const;

 private:
  friend LowerBoundTable build_lower_table(const PlqFunction& f, double eps);

  LowerBoundTable(PlqFunction f, double eps) : f_(std::move(f)), eps_(eps) {}

  std::optional<double> eval_at_row(std::size_t k, double xbar) const;

  PlqFunction f_;
  double eps_ = 0.0;
  std::vector<LowerBoundRow> rows_;
  BuildStats stats_;
};

// Direction of the constant-time tangent-line solve: given the tangency
// point, find where the lowered function meets the tangent line (forward),
// or recover the tangency point from that meeting point (backward).
enum class SolveDirection { xbar_from_xt, xt_from_xbar };

struct TangentSolveInput {
  double xt = 0.0;     // tangency abscissa (meeting abscissa when backward)
  std::size_t it = 0;  // piece whose slope at xt carries the line
  std::size_t ib = 0;  // piece the solved point must land in
  SolveDirection direction = SolveDirection::xbar_from_xt;
};

// Solves p_ib(x) - eps = y(xt) + p_it'(xt) (x - xt) for x > xt within piece
// ib; the quadratic case takes the larger root (the sweep exits a validity
// interval upward). Throws Error(no_root) on parallel lines or a negative
// discriminant, Error(root_outside_piece) when the root misses piece ib.
double compute_xb(const PlqFunction& f, const TangentSolveInput& input,
                  double eps);

// Inverse solve: the tangency abscissa xt < xbar on quadratic piece `it`
// whose tangent line passes through (xbar, f piece ib value - eps).
// Closed form xt = xbar - sqrt((p_it(xbar) - p_ib(xbar) + eps) / a_it).
double compute_xt(const PlqFunction& f, double xbar, std::size_t ib,
                  std::size_t it, double eps);

// The full sweep: O(n) rows built with O(n) total work. Throws
// Error(non_positive_epsilon) unless 0 < eps < inf.
LowerBoundTable build_lower_table(const PlqFunction& f, double eps);

// Both halves of the graph: the lower bound of f and, for the upper bound,
// the lower bound of the reflection h(x) = f(-x), since
// sup of the set at xbar = -(inf of h's set at -xbar).
class EpsSubGraph {
 public:
  EpsSubGraph(LowerBoundTable lower, LowerBoundTable upper_source)
      : lower_(std::move(lower)), upper_source_(std::move(upper_source)) {}

  const LowerBoundTable& lower() const { return lower_; }
  const LowerBoundTable& upper_source() const { return upper_source_; }
  double eps() const { return lower_.eps(); }

  // [inf, sup] of the eps-subgradient set at xbar; empty outside the domain.
  Interval eval(double xbar) const;

 private:
  LowerBoundTable lower_;
  LowerBoundTable upper_source_;
};

EpsSubGraph build_graph(const PlqFunction& f, double eps);

inline std::optional<double> eval_lower(const LowerBoundTable& table,
                                        double xbar) {
  return table.eval(xbar);
}
inline std::vector<std::optional<double>> eval_lower_grid(
    const LowerBoundTable& table, const std::vector<double>& xs) {
  return table.eval_grid(xs);
}
inline PieceForm classify_piece(const LowerBoundTable& table, std::size_t k) {
  return table.classify(k);
}
inline Interval eval_graph(const EpsSubGraph& graph, double xbar) {
  return graph.eval(xbar);
}

// CSV with header "x,t,it,ib,v", indices 1-based, irrelevant entries `nan`,
// infinities `inf`/`-inf`.
std::string serialize_lower_table(const LowerBoundTable& table);
std::vector<LowerBoundRow> parse_lower_table_csv(const std::string& text);

}  // namespace plq

#endif  // PLQ_EPSSUB_GRAPH_HPP
