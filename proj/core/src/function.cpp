#include "plq/function.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "plq/error.hpp"

namespace plq {
namespace {

[[noreturn]] void fail(errc code, const std::string& msg) {
  throw Error(code, msg);
}

std::string row_tag(std::size_t i) { return "row " + std::to_string(i); }

}  // namespace

PlqFunction::PlqFunction(std::vector<PlqPiece> rows, Tolerance tol)
    : rows_(std::move(rows)), tol_(tol) {
  const std::size_t n = rows_.size() - 1;
  needle_ = (n == 0 && is_finite(rows_[0].x));

  first_finite_ = 0;
  while (rows_[first_finite_].is_infinite()) ++first_finite_;
  last_finite_ = n;
  while (rows_[last_finite_].is_infinite()) --last_finite_;

  if (needle_) {
    domain_ = Domain{rows_[0].x, rows_[0].x};
  } else {
    domain_.lo = rows_[0].is_infinite() ? rows_[0].x : -kInf;
    domain_.hi = rows_[n].is_infinite() ? rows_[n - 1].x : kInf;
  }
}

PlqFunction PlqFunction::validate(std::vector<PlqPiece> rows,
                                  const Tolerance& tol) {
  if (rows.empty()) fail(errc::empty_input, "no rows");
  const std::size_t n = rows.size() - 1;

  for (std::size_t i = 0; i <= n; ++i) {
    const PlqPiece& p = rows[i];
    if (std::isnan(p.x)) {
      fail(errc::bad_infinity_convention, row_tag(i) + ": breakpoint is NaN");
    }
    if (!is_finite(p.a) || !is_finite(p.b)) {
      fail(errc::bad_infinity_convention,
           row_tag(i) + ": coefficients a, b must be finite");
    }
    if (std::isnan(p.c) || p.c == -kInf) {
      fail(errc::bad_infinity_convention,
           row_tag(i) + ": c must be finite or +inf");
    }
    if (p.a < 0.0) {
      fail(errc::non_convex_piece, row_tag(i) + ": negative curvature");
    }
    if (p.c == kInf) {
      if (i != 0 && i != n) {
        fail(errc::bad_infinity_convention,
             row_tag(i) + ": interior piece may not be infinite");
      }
      if (p.a != 0.0 || p.b != 0.0) {
        fail(errc::bad_infinity_convention,
             row_tag(i) + ": infinite piece requires a = b = 0");
      }
    }
  }

  if (n == 0) {
    const PlqPiece& p = rows[0];
    if (p.x == -kInf) {
      fail(errc::bad_infinity_convention, "breakpoint -inf is not allowed");
    }
    if (p.c == kInf) {
      fail(errc::bad_infinity_convention, "function has no finite piece");
    }
    if (is_finite(p.x) && (p.a != 0.0 || p.b != 0.0)) {
      fail(errc::bad_infinity_convention,
           "single finite-breakpoint row must have a = b = 0 "
           "(needle encoding)");
    }
    return PlqFunction(std::move(rows), tol);
  }

  if (rows[n].x != kInf) {
    fail(errc::bad_infinity_convention, "last breakpoint must be +inf");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(rows[i].x)) {
      fail(errc::bad_infinity_convention,
           row_tag(i) + ": only the last breakpoint may be infinite");
    }
    if (i > 0 && !(rows[i - 1].x < rows[i].x)) {
      fail(errc::not_sorted, row_tag(i) + ": breakpoints must increase");
    }
  }

  bool any_finite = false;
  for (const PlqPiece& p : rows) any_finite = any_finite || !p.is_infinite();
  if (!any_finite) {
    fail(errc::bad_infinity_convention, "function has no finite piece");
  }

  // Joint checks compare at the precision evaluation can deliver: far from
  // zero the monomial form loses |a| x^2-scale digits to cancellation, so the
  // comparison scale is the term magnitude, not the (possibly tiny) value.
  const auto value_scale = [](const PlqPiece& p, double x) {
    return (std::abs(p.a) * std::abs(x) + std::abs(p.b)) * std::abs(x) +
           std::abs(p.c);
  };
  const auto slope_scale = [](const PlqPiece& p, double x) {
    return 2.0 * std::abs(p.a) * std::abs(x) + std::abs(p.b);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const PlqPiece& left = rows[i];
    const PlqPiece& right = rows[i + 1];
    if (left.is_infinite() || right.is_infinite()) continue;
    const double x = left.x;
    const double v1 = left.value(x);
    const double v2 = right.value(x);
    if (!tol.close(v1, v2, std::max(value_scale(left, x),
                                    value_scale(right, x)))) {
      fail(errc::discontinuous,
           "pieces " + std::to_string(i) + " and " + std::to_string(i + 1) +
               " disagree at their shared breakpoint");
    }
    const double s1 = left.slope(x);
    const double s2 = right.slope(x);
    if (!tol.leq(s1, s2, std::max(slope_scale(left, x),
                                  slope_scale(right, x)))) {
      fail(errc::slope_decreasing,
           "slope drops across breakpoint " + std::to_string(i));
    }
  }

  return PlqFunction(std::move(rows), tol);
}

std::size_t PlqFunction::locate(double x) const {
  auto it = std::lower_bound(
      rows_.begin(), rows_.end(), x,
      [](const PlqPiece& p, double v) { return p.x < v; });
  if (it == rows_.end()) return last_index();  // needle only
  return static_cast<std::size_t>(it - rows_.begin());
}

double PlqFunction::eval(double x) const {
  if (needle_) return x == rows_[0].x ? rows_[0].c : kInf;
  const std::size_t i = locate(x);
  const PlqPiece& p = rows_[i];
  if (p.is_infinite()) {
    // Closed left domain endpoint: the breakpoint itself belongs to the
    // finite side by lower semicontinuity.
    if (x == p.x && i + 1 <= last_index() && !rows_[i + 1].is_infinite()) {
      return rows_[i + 1].value(x);
    }
    return kInf;
  }
  return p.value(x);
}

std::size_t PlqFunction::piece_index(double x) const {
  if (!domain_.contains(x)) {
    throw Error(errc::out_of_domain,
                "x = " + std::to_string(x) + " is outside the domain");
  }
  return locate(x);
}

double PlqFunction::left_slope_at(std::size_t i) const {
  assert(i < last_index() || (i == 0 && piece_count() == 1));
  const PlqPiece& p = rows_[i];
  return p.is_infinite() ? -kInf : p.slope(p.x);
}

double PlqFunction::right_slope_at(std::size_t i) const {
  assert(i + 1 <= last_index());
  const PlqPiece& next = rows_[i + 1];
  return next.is_infinite() ? kInf : next.slope(rows_[i].x);
}

double PlqFunction::value_at_breakpoint(std::size_t i) const {
  const double x = rows_[i].x;
  if (!rows_[i].is_infinite()) return rows_[i].value(x);
  assert(i + 1 <= last_index() && !rows_[i + 1].is_infinite());
  return rows_[i + 1].value(x);
}

Interval PlqFunction::subdifferential(double x) const {
  if (needle_) {
    return x == rows_[0].x ? Interval::closed(-kInf, kInf) : Interval::none();
  }
  if (!domain_.contains(x)) return Interval::none();
  if (x == domain_.lo) return Interval::closed(-kInf, right_slope_at(0));
  if (x == domain_.hi) {
    return Interval::closed(left_slope_at(last_index() - 1), kInf);
  }
  const std::size_t i = locate(x);
  if (i < last_index() && x == rows_[i].x) {
    return Interval::closed(left_slope_at(i), right_slope_at(i));
  }
  const double s = rows_[i].slope(x);
  return Interval::closed(s, s);
}

PlqFunction PlqFunction::reflect() const {
  const std::size_t n = last_index();
  std::vector<PlqPiece> out(rows_.size());
  for (std::size_t j = 0; j <= n; ++j) {
    const PlqPiece& src = rows_[n - j];
    out[j].a = src.a;
    out[j].b = -src.b;
    out[j].c = src.c;
    if (n == 0) {
      out[j].x = is_finite(rows_[0].x) ? -rows_[0].x : kInf;
    } else {
      out[j].x = j < n ? -rows_[n - 1 - j].x : kInf;
    }
  }
  return validate(std::move(out), tol_);
}

double PlqFunction::breakpoint_slope(std::size_t i) const {
  const PlqPiece& p = rows_[i];
  if (!is_finite(p.x)) {
    throw Error(errc::infinite_breakpoint,
                row_tag(i) + " has no finite breakpoint");
  }
  return p.slope(p.x);
}

}  // namespace plq
