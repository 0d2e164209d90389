#include "plq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "plq/error.hpp"

namespace plq::oracle {
namespace {

// Negating 0.0 yields -0.0, harmless numerically but noisy in serialized
// output; strip the sign off zeros.
double clean(double v) { return v == 0.0 ? 0.0 : v; }

void require_positive_eps(double eps) {
  if (!(eps > 0.0) || !is_finite(eps)) {
    throw Error(errc::non_positive_epsilon, "eps must be positive and finite");
  }
}

}  // namespace

PlqFunction conjugate(const PlqFunction& f) {
  const Tolerance& tol = f.tolerance();

  if (f.is_needle()) {
    // f = c + indicator{xt}: the conjugate is the global line s xt - c.
    const PlqPiece& p = f.piece(0);
    return PlqFunction::validate({{kInf, 0.0, p.x, clean(-p.c)}}, tol);
  }
  if (f.piece_count() == 1) {
    const PlqPiece& p = f.piece(0);
    if (p.is_linear()) {
      // f = b x + c: the conjugate is the needle at b with value -c.
      return PlqFunction::validate({{p.b, 0.0, 0.0, clean(-p.c)}}, tol);
    }
    // f = a x^2 + b x + c: f*(s) = (s - b)^2 / (4 a) - c.
    return PlqFunction::validate(
        {{kInf, 1.0 / (4.0 * p.a), clean(-p.b / (2.0 * p.a)),
          clean(p.b * p.b / (4.0 * p.a) - p.c)}},
        tol);
  }

  // General case: walk slopes left to right. Each finite breakpoint x_j of f
  // contributes the affine row s x_j - f(x_j) over the slope gap of its kink;
  // each finite quadratic piece contributes its own conjugate parabola over
  // the slope range it attains; linear pieces attain a single slope and
  // contribute nothing beyond the kink rows around them; infinity pieces at
  // the ends turn into affine tails (bounded domain) while linear end pieces
  // turn into infinity rows (conjugate domain bounded by the asymptotic
  // slope).
  std::vector<PlqPiece> out;
  double last_s = -kInf;
  auto emit = [&](double x, double a, double b, double c) {
    if (x <= last_s) return;  // zero-width slope interval
    out.push_back({x, clean(a), clean(b), clean(c)});
    last_s = x;
  };

  const std::size_t n = f.last_index();
  const PlqPiece& first = f.piece(0);
  if (first.is_infinite()) {
    // Domain bounded below: slopes down to -inf are picked up at x_0 by the
    // j = 0 vertex row below.
  } else if (first.is_linear()) {
    emit(first.b, 0.0, 0.0, kInf);  // no point of f has slope below b_0
  } else {
    emit(f.breakpoint_slope(0), 1.0 / (4.0 * first.a),
         -first.b / (2.0 * first.a),
         first.b * first.b / (4.0 * first.a) - first.c);
  }

  for (std::size_t j = 0; j < n; ++j) {
    emit(f.right_slope_at(j), 0.0, f.breakpoint(j),
         -f.value_at_breakpoint(j));
    const PlqPiece& p = f.piece(j + 1);
    const bool last = j + 1 == n;
    if (p.is_infinite()) continue;  // vertex row above already reached +inf
    if (p.is_linear()) {
      if (last) emit(kInf, 0.0, 0.0, kInf);
    } else {
      emit(last ? kInf : f.breakpoint_slope(j + 1), 1.0 / (4.0 * p.a),
           -p.b / (2.0 * p.a), p.b * p.b / (4.0 * p.a) - p.c);
    }
  }
  return PlqFunction::validate(std::move(out), tol);
}

Interval eps_sub_reference(const PlqFunction& f, double xbar, double eps) {
  require_positive_eps(eps);
  const double ybar = f.eval(xbar);
  if (ybar == kInf) return Interval::none();

  const PlqFunction g = conjugate(f);

  // Feasible slopes solve g_k(s) <= eps - ybar + s xbar piece by piece; the
  // union over pieces is a single closed interval because g(s) - s xbar is
  // convex, so min/max of the clipped per-piece solutions suffice.
  double lo = kInf;
  double hi = -kInf;
  bool any = false;
  auto take = [&](double l, double h) {
    if (!(l <= h)) return;
    lo = std::min(lo, l);
    hi = std::max(hi, h);
    any = true;
  };

  for (std::size_t k = 0; k < g.piece_count(); ++k) {
    const PlqPiece& p = g.piece(k);
    if (p.is_infinite()) continue;
    const double l = g.is_needle() ? p.x : (k == 0 ? -kInf : g.breakpoint(k - 1));
    const double h = p.x;
    // q(s) = A s^2 + B s + C <= 0 on [l, h].
    const double A = p.a;
    const double B = p.b - xbar;
    const double C = p.c + ybar - eps;
    if (A > 0.0) {
      const double disc = B * B - 4.0 * A * C;
      if (disc < 0.0) continue;
      const double r = std::sqrt(disc);
      take(std::max(l, (-B - r) / (2.0 * A)),
           std::min(h, (-B + r) / (2.0 * A)));
    } else if (B > 0.0) {
      take(l, std::min(h, -C / B));
    } else if (B < 0.0) {
      take(std::max(l, -C / B), h);
    } else if (C <= 0.0) {
      take(l, h);
    }
  }
  return any ? Interval::closed(lo, hi) : Interval::none();
}

bool is_eps_subgradient(const PlqFunction& f, double xbar, double eps,
                        double s, double slack) {
  require_positive_eps(eps);
  const double ybar = f.eval(xbar);
  if (ybar == kInf || !is_finite(s)) return false;

  const double target = ybar - s * xbar - eps;

  // inf over each piece of f(y) - s y, taken in closed form.
  double best = kInf;
  for (std::size_t j = 0; j < f.piece_count(); ++j) {
    const PlqPiece& p = f.piece(j);
    if (p.is_infinite()) continue;
    const double l = f.is_needle() ? p.x : (j == 0 ? -kInf : f.breakpoint(j - 1));
    const double h = p.x;
    const double m = p.b - s;
    double val;
    if (p.a > 0.0) {
      const double ystar = std::clamp(-m / (2.0 * p.a), l, h);
      val = (p.a * ystar + m) * ystar + p.c;
    } else if (m > 0.0) {
      val = l == -kInf ? -kInf : m * l + p.c;
    } else if (m < 0.0) {
      val = h == kInf ? -kInf : m * h + p.c;
    } else {
      val = p.c;
    }
    best = std::min(best, val);
  }
  return best >= target - slack;
}

}  // namespace plq::oracle
