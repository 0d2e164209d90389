#ifndef PLQ_TEST_HELPERS_HPP
#define PLQ_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "plq/function.hpp"
#include "plq/types.hpp"

namespace plqtest {

// f(x) = |x|
inline plq::PlqFunction abs_fn() {
  return plq::PlqFunction::validate(
      {{0.0, 0.0, -1.0, 0.0}, {plq::kInf, 0.0, 1.0, 0.0}});
}

// f(x) = x^2
inline plq::PlqFunction square_fn() {
  return plq::PlqFunction::validate({{plq::kInf, 1.0, 0.0, 0.0}});
}

// f(x) = x^2 on [0, inf), +inf elsewhere
inline plq::PlqFunction square_on_halfline() {
  return plq::PlqFunction::validate(
      {{0.0, 0.0, 0.0, plq::kInf}, {plq::kInf, 1.0, 0.0, 0.0}});
}

// f = c at x0, +inf elsewhere
inline plq::PlqFunction needle_fn(double x0 = 1.0, double c = 2.0) {
  return plq::PlqFunction::validate({{x0, 0.0, 0.0, c}});
}

// f(x) = b x + c on the whole line
inline plq::PlqFunction linear_fn(double b = 3.0, double c = -1.0) {
  return plq::PlqFunction::validate({{plq::kInf, 0.0, b, c}});
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Restricts a full-line function to [x_j, inf): the finite pieces after j
// are kept verbatim, piece j and everything left of it collapse into an
// infinity row.
inline plq::PlqFunction clip_left(const plq::PlqFunction& f, std::size_t j) {
  std::vector<plq::PlqPiece> rows;
  rows.push_back({f.breakpoint(j), 0.0, 0.0, plq::kInf});
  for (std::size_t k = j + 1; k <= f.last_index(); ++k) {
    rows.push_back(f.piece(k));
  }
  return plq::PlqFunction::validate(std::move(rows), f.tolerance());
}

// Restricts to (-inf, x_j].
inline plq::PlqFunction clip_right(const plq::PlqFunction& f, std::size_t j) {
  std::vector<plq::PlqPiece> rows;
  for (std::size_t k = 0; k <= j; ++k) rows.push_back(f.piece(k));
  rows.push_back({plq::kInf, 0.0, 0.0, plq::kInf});
  return plq::PlqFunction::validate(std::move(rows), f.tolerance());
}

// Deterministic mixed corpus: generator output plus bounded, doubly bounded,
// needle and plain linear instances. Sizes in [1, max_pieces].
inline std::vector<plq::PlqFunction> make_corpus(std::size_t count,
                                                 std::uint64_t seed,
                                                 std::size_t max_pieces = 50) {
  std::mt19937_64 rng(seed);
  std::vector<plq::PlqFunction> out;
  out.reserve(count);
  while (out.size() < count) {
    const double kind = uniform01(rng);
    if (kind < 0.03) {
      out.push_back(needle_fn(uniform(rng, -3.0, 3.0), uniform(rng, -2.0, 2.0)));
      continue;
    }
    if (kind < 0.06) {
      out.push_back(linear_fn(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)));
      continue;
    }
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % max_pieces);
    plq::PlqFunction f = plq::generate_convex_plq(n, rng());
    const std::size_t last = f.last_index();
    if (kind < 0.8 || last < 1) {
      out.push_back(std::move(f));
    } else if (kind < 0.87) {
      out.push_back(clip_left(f, rng() % last));
    } else if (kind < 0.94) {
      out.push_back(clip_right(f, rng() % last));
    } else if (last >= 3) {
      const std::size_t j1 = rng() % (last - 2);
      plq::PlqFunction g = clip_left(f, j1);
      out.push_back(clip_right(g, 1 + rng() % (g.last_index() - 1)));
    } else {
      out.push_back(std::move(f));
    }
  }
  return out;
}

// Window of interesting query points: the finite breakpoint span padded by 2,
// clamped into the domain.
inline std::pair<double, double> sampling_window(const plq::PlqFunction& f) {
  double lo = plq::kInf;
  double hi = -plq::kInf;
  for (std::size_t i = 0; i <= f.last_index(); ++i) {
    const double x = f.breakpoint(i);
    if (plq::is_finite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!plq::is_finite(lo)) {
    lo = -2.0;
    hi = 2.0;
  }
  const plq::Domain d = f.domain();
  return {std::max(lo - 2.0, d.lo), std::min(hi + 2.0, d.hi)};
}

// In-domain query points: the window endpoints (covering bounded domain
// ends) plus uniform draws.
inline std::vector<double> query_points(const plq::PlqFunction& f,
                                        std::size_t count,
                                        std::mt19937_64& rng) {
  const auto [lo, hi] = sampling_window(f);
  std::vector<double> xs;
  xs.reserve(count);
  xs.push_back(lo);
  if (count > 1) xs.push_back(hi);
  while (xs.size() < count) xs.push_back(uniform(rng, lo, hi));
  return xs;
}

// Endpoint agreement up to a relative tolerance with floor 1; infinite
// endpoints must agree exactly.
inline bool endpoints_match(double got, double want, double rel) {
  if (!plq::is_finite(got) || !plq::is_finite(want)) return got == want;
  return std::abs(got - want) <=
         rel * std::max({1.0, std::abs(got), std::abs(want)});
}

inline bool intervals_match(const plq::Interval& got, const plq::Interval& want,
                            double rel) {
  if (got.is_empty() != want.is_empty()) return false;
  if (got.is_empty()) return true;
  return endpoints_match(got.lo, want.lo, rel) &&
         endpoints_match(got.hi, want.hi, rel);
}

constexpr double kEpsGrid[] = {1e-3, 1e-1, 1.0, 10.0};

}  // namespace plqtest

#endif  // PLQ_TEST_HELPERS_HPP
