#include "plq/epssub_point.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>

#include "plq/error.hpp"

namespace plq {
namespace {

void require_eps(double eps) {
  if (!(eps > 0.0) || !is_finite(eps)) {
    throw Error(errc::non_positive_epsilon, "eps must be positive and finite");
  }
}

// Zero-copy mirror of a function: view piece j is f's piece n-j with the
// slope-carrying coefficient negated and breakpoints mirrored, so the upper
// endpoint runs the lower-endpoint search unchanged on the reversed view.
// Every mapping is a negation, hence exact in floating point.
struct View {
  const PlqFunction* f;
  bool rev;
  std::size_t n;  // last piece index

  View(const PlqFunction* fn, bool reversed)
      : f(fn), rev(reversed), n(fn->last_index()) {}

  double breakpoint(std::size_t j) const {
    if (!rev) return f->breakpoint(j);
    return j < n ? -f->breakpoint(n - 1 - j) : kInf;
  }
  PlqPiece piece(std::size_t j) const {
    if (!rev) return f->piece(j);
    const PlqPiece& p = f->piece(n - j);
    return {breakpoint(j), p.a, -p.b, p.c};
  }
  double value_at(std::size_t j) const {
    return f->value_at_breakpoint(rev ? n - 1 - j : j);
  }
  double left_slope(std::size_t j) const {
    return rev ? -f->right_slope_at(n - 1 - j) : f->left_slope_at(j);
  }
  double right_slope(std::size_t j) const {
    return rev ? -f->left_slope_at(n - 1 - j) : f->right_slope_at(j);
  }
  double eval(double x) const { return f->eval(rev ? -x : x); }
  double domain_lo() const { return rev ? -f->domain().hi : f->domain().lo; }

  // Smallest j with x <= breakpoint(j); the tie convention of the view
  // matches the one of a materialized reflection.
  std::size_t piece_index(double x) const {
    std::size_t lo = 0;
    std::size_t hi = n;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (x <= breakpoint(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }
};

[[noreturn]] void no_crossing(const char* what) {
  throw Error(errc::no_crossing, what);
}

// First s in the bracket where the conjugate meets or drops below `line`,
// scanning left to right. The bracket is the vertex segment of breakpoint l
// (slopes [left slope, right slope] at x_l, where f* is affine with slope
// x_l) followed by the conjugate segment of piece u when u == l + 1; for
// u == l it is piece l's conjugate segment alone over its full slope range.
double cross_left(const View& V, std::size_t l, std::size_t u,
                  const SupportLine& line) {
  const Tolerance& tol = V.f->tolerance();

  if (u == l + 1) {
    const double xl = V.breakpoint(l);
    const double yl = V.value_at(l);
    const double s_lo = V.left_slope(l);   // -inf when piece l is an infinity piece
    const double s_hi = V.right_slope(l);  // +inf when piece l+1 is one
    const double diff_slope = xl - line.slope;
    // difference (f* - line)(s) = diff_slope * s - yl - line.intercept
    if (s_lo == -kInf) {
      if (diff_slope > 0.0) return -kInf;  // f* sinks below the line leftward
      if (diff_slope == 0.0 && -yl - line.intercept <= 0.0) return -kInf;
    } else if (diff_slope * s_lo - yl - line.intercept <= 0.0) {
      return s_lo;  // bracket start already feasible
    }
    if (diff_slope < 0.0) {
      const double s_cross = (line.intercept + yl) / diff_slope;
      if (s_cross <= s_hi) return s_cross;
    }
    // Difference still positive at the vertex segment's right end; the
    // crossing, if any, lies on piece u's own conjugate segment.
  }

  const PlqPiece pu = V.piece(u);
  if (pu.is_infinite()) no_crossing("bracket ends in an infinity piece");

  // Slope range piece u attains: [sigma+ at its left end, sigma- at its
  // right end]; unbounded limits for the outermost pieces.
  const double lo = u == 0 ? -kInf : V.right_slope(u - 1);
  const double hi = u < V.n ? V.left_slope(u)
                            : (pu.is_linear() ? pu.b : kInf);

  if (pu.is_linear()) {
    // Zero-width segment: the single slope b with f*(b) = b x_{u-1} - y_{u-1}
    // (or -c over a global line).
    const double fstar =
        u == 0 ? -pu.c : pu.b * V.breakpoint(u - 1) - V.value_at(u - 1);
    if (fstar <= line(pu.b)) return pu.b;
    no_crossing("no crossing in a linear bracket piece");
  }

  // f*(s) = (s - b)^2 / (4a) - c on [lo, hi]; f* - line has roots
  // b + 2 a slope -+ 2 sqrt(a (p_u(slope) + intercept)).
  if (lo != -kInf) {
    const double at_lo = (lo - pu.b) * (lo - pu.b) / (4.0 * pu.a) - pu.c;
    if (at_lo <= line(lo)) return lo;
  }
  const double height = pu.value(line.slope) + line.intercept;
  double radicand = pu.a * height;
  if (radicand < 0.0) {
    const double slack =
        std::abs(pu.a) * tol.gap(std::abs(pu.value(line.slope)) +
                                 std::abs(line.intercept));
    if (radicand < -slack) no_crossing("line passes under the conjugate");
    radicand = 0.0;  // degenerate tangency
  }
  const double root = pu.b + 2.0 * pu.a * line.slope - 2.0 * std::sqrt(radicand);
  if (hi != kInf && root > hi + tol.gap(std::abs(hi) + std::abs(root))) {
    no_crossing("crossing beyond the bracket");
  }
  if (lo != -kInf && root < lo - tol.gap(std::abs(lo) + std::abs(root))) {
    no_crossing("crossing before the bracket");
  }
  return root;
}

// Mirror of cross_left: last s in the bracket where the conjugate meets or
// drops below `line`, scanning right to left. Piece u's segment is examined
// from its right end first, then (u == l + 1) the vertex of breakpoint l.
double cross_right(const View& V, std::size_t l, std::size_t u,
                   const SupportLine& line) {
  const Tolerance& tol = V.f->tolerance();

  const PlqPiece pu = V.piece(u);
  if (!pu.is_infinite()) {
    const double lo = u == 0 ? -kInf : V.right_slope(u - 1);
    const double hi = u < V.n ? V.left_slope(u)
                              : (pu.is_linear() ? pu.b : kInf);
    if (pu.is_linear()) {
      const double fstar =
          u == 0 ? -pu.c : pu.b * V.breakpoint(u - 1) - V.value_at(u - 1);
      if (fstar <= line(pu.b)) return pu.b;
    } else {
      if (hi != kInf) {
        const double at_hi = (hi - pu.b) * (hi - pu.b) / (4.0 * pu.a) - pu.c;
        if (at_hi <= line(hi)) return hi;
      }
      const double height = pu.value(line.slope) + line.intercept;
      double radicand = pu.a * height;
      bool real_roots = true;
      if (radicand < 0.0) {
        const double slack =
            std::abs(pu.a) * tol.gap(std::abs(pu.value(line.slope)) +
                                     std::abs(line.intercept));
        if (radicand < -slack) {
          real_roots = false;
        } else {
          radicand = 0.0;
        }
      }
      if (real_roots) {
        const double root =
            pu.b + 2.0 * pu.a * line.slope + 2.0 * std::sqrt(radicand);
        const bool below_hi =
            hi == kInf || root <= hi + tol.gap(std::abs(hi) + std::abs(root));
        const bool above_lo =
            lo == -kInf || root >= lo - tol.gap(std::abs(lo) + std::abs(root));
        if (below_hi && above_lo) return root;
      }
    }
  }

  if (u == l + 1) {
    const double xl = V.breakpoint(l);
    const double yl = V.value_at(l);
    const double s_lo = V.left_slope(l);
    const double s_hi = V.right_slope(l);
    const double diff_slope = xl - line.slope;
    if (s_hi == kInf) {
      if (diff_slope < 0.0) return kInf;  // f* sinks below the line rightward
      if (diff_slope == 0.0 && -yl - line.intercept <= 0.0) return kInf;
    } else if (diff_slope * s_hi - yl - line.intercept <= 0.0) {
      return s_hi;  // bracket end already feasible
    }
    if (diff_slope > 0.0) {
      const double s_cross = (line.intercept + yl) / diff_slope;
      if (s_lo == -kInf || s_cross >= s_lo) return s_cross;
    }
  }
  no_crossing("no crossing on the bracket's right side");
}

// inf of the eps-subgradient set of the view at xbar, with ybar = V.eval(xbar)
// finite and precomputed (identical for the plain and mirrored views).
double lower_end(const View& V, double xbar, double eps, double ybar) {
  const SupportLine line{xbar, eps - ybar};
  if (V.n == 0) return cross_left(V, 0, 0, line);  // one global piece
  if (xbar == V.domain_lo()) return -kInf;  // line pivots freely at the end

  const std::size_t i = V.piece_index(xbar);
  if (i == 0) return cross_left(V, 0, 0, line);  // no breakpoint left of xbar

  // Conjugate sample at breakpoint j < i; an infinity piece 0 samples the
  // right slope instead (the only slope of f attained at a bounded end).
  const auto knot = [&](std::size_t j) {
    const double sj =
        V.piece(j).is_infinite() ? V.right_slope(j) : V.left_slope(j);
    return ConjugatePoint{sj, sj * V.breakpoint(j) - V.value_at(j),
                          V.breakpoint(j)};
  };
  // above(j) is nonincreasing in j: once the conjugate drops below the line
  // it stays below through the last sample, since every sampled slope is at
  // most the upper eps-subgradient endpoint.
  const auto above = [&](std::size_t j) {
    const ConjugatePoint p = knot(j);
    return p.ystar > line(p.s);
  };

  if (!above(0)) {
    // Feasible already at the first sample: the lower endpoint sits on the
    // conjugate's leftmost stretch.
    const PlqPiece p0 = V.piece(0);
    if (p0.is_infinite()) return cross_left(V, 0, 1, line);  // affine tail
    if (p0.is_linear()) return p0.b;  // conjugate is +inf below b
    return cross_left(V, 0, 0, line);  // parabolic tail of piece 0
  }

  // Dichotomic search for the last sample still above the line.
  std::size_t lo = 0;
  std::size_t hi = i - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (above(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return cross_left(V, lo, lo + 1, line);
}

}  // namespace

SupportLine support_line(const PlqFunction& f, double xbar, double eps) {
  require_eps(eps);
  const double y = f.eval(xbar);
  if (y == kInf) {
    throw Error(errc::out_of_domain, "xbar outside the domain");
  }
  return {xbar, eps - y};
}

ConjugatePoint conjugate_point(const PlqFunction& f, std::size_t i) {
  const double s = f.breakpoint_slope(i);  // throws on an infinite breakpoint
  const double x = f.breakpoint(i);
  return {s, s * x - f.eval(x), x};
}

Interval eps_subdifferential(const PlqFunction& f, double xbar, double eps) {
  require_eps(eps);
  const double ybar = f.eval(xbar);
  if (ybar == kInf) return Interval::none();
  if (f.is_needle()) return Interval::closed(-kInf, kInf);

  const double lo = lower_end(View(&f, false), xbar, eps, ybar);
  const double hi = -lower_end(View(&f, true), -xbar, eps, ybar);
  return Interval::closed(lo, hi);
}

double intersection(const PlqFunction& f, std::size_t l, std::size_t u,
                    const SupportLine& line, Side side) {
  const std::size_t n = f.last_index();
  if (u > n || (u != l && u != l + 1)) {
    throw Error(errc::no_crossing, "bracket must satisfy u == l or u == l+1");
  }
  const View v(&f, false);
  return side == Side::left ? cross_left(v, l, u, line)
                            : cross_right(v, l, u, line);
}

}  // namespace plq
