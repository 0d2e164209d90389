#include <cstdint>
#include <random>
#include <vector>

#include "plq/error.hpp"
#include "plq/function.hpp"

namespace plq {
namespace {

// std::uniform_real_distribution is implementation-defined; draw bits
// directly so the corpus is identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace

PlqFunction generate_convex_plq(std::size_t pieces, std::uint64_t seed) {
  if (pieces == 0) throw Error(errc::empty_input, "need at least one piece");
  std::mt19937_64 rng(seed);

  auto curvature = [&] { return uniform(rng, 0.1, 2.0); };
  // Mix smooth joints with genuine kinks, keeping kinks well clear of the
  // tolerance band.
  auto slope_jump = [&] {
    return uniform01(rng) < 0.3 ? 0.0 : uniform(rng, 0.05, 0.5);
  };

  if (pieces == 1) {
    PlqPiece p{kInf, curvature(), uniform(rng, -1.0, 1.0),
               uniform(rng, -1.0, 1.0)};
    return PlqFunction::validate({p});
  }

  const std::size_t m = pieces - 1;
  std::vector<double> bp(m);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    total += uniform(rng, 0.5, 1.5);
    bp[j] = total;
  }
  for (double& x : bp) x -= total / 2.0;

  std::vector<PlqPiece> rows(pieces);
  // Leftmost piece is quadratic (even positions quadratic, odd linear);
  // anchor it by its value and slope at the first breakpoint.
  double y = uniform(rng, -1.0, 1.0);
  double exit_slope = uniform(rng, -2.0, 0.0);
  rows[0].a = curvature();
  rows[0].b = exit_slope - 2.0 * rows[0].a * bp[0];
  rows[0].c = y - (rows[0].a * bp[0] + rows[0].b) * bp[0];
  rows[0].x = bp[0];

  for (std::size_t k = 1; k < pieces; ++k) {
    const double xl = bp[k - 1];
    PlqPiece& p = rows[k];
    p.a = (k % 2 == 0) ? curvature() : 0.0;
    const double slope_in = exit_slope + slope_jump();
    p.b = slope_in - 2.0 * p.a * xl;
    p.c = y - (p.a * xl + p.b) * xl;
    if (k < m) {
      p.x = bp[k];
      exit_slope = p.slope(bp[k]);
      y = p.value(bp[k]);
    } else {
      p.x = kInf;
    }
  }
  return PlqFunction::validate(std::move(rows));
}

}  // namespace plq
