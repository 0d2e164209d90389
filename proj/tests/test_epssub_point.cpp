#include "doctest.h"

#include <cmath>
#include <future>
#include <random>
#include <vector>

#include "plq/epssub_point.hpp"
#include "plq/error.hpp"
#include "plq/oracle.hpp"
#include "test_helpers.hpp"

using plq::eps_subdifferential;
using plq::Interval;
using plq::kInf;
using plq::PlqFunction;
using plq::Side;
using plq::SupportLine;

TEST_CASE("worked pointwise intervals") {
  // kinked: either side of the kink plus the kink itself
  const PlqFunction a = plqtest::abs_fn();
  Interval s = eps_subdifferential(a, 0.5, 0.5);
  CHECK(std::abs(s.lo - 0.0) <= 1e-12);
  CHECK(std::abs(s.hi - 1.0) <= 1e-12);
  s = eps_subdifferential(a, 0.0, 0.1);
  CHECK(std::abs(s.lo + 1.0) <= 1e-12);
  CHECK(std::abs(s.hi - 1.0) <= 1e-12);
  s = eps_subdifferential(a, -2.0, 0.5);
  CHECK(std::abs(s.lo + 1.0) <= 1e-12);         // stays -1 far left
  CHECK(std::abs(s.hi - (-0.75)) <= 1e-12);     // -(x - 0.5)/x at x = 2

  // smooth: [-2, 2] around the vertex of x^2 at eps = 1
  s = eps_subdifferential(plqtest::square_fn(), 0.0, 1.0);
  CHECK(std::abs(s.lo + 2.0) <= 1e-12);
  CHECK(std::abs(s.hi - 2.0) <= 1e-12);

  // bounded domain end: lower endpoint drops to -inf
  s = eps_subdifferential(plqtest::square_on_halfline(), 0.0, 1.0);
  CHECK(s.lo == -kInf);
  CHECK(std::abs(s.hi - 2.0) <= 1e-12);

  // quadratic-tail crossing: f = x^2 up to 1, then slope-2 line, at
  // xbar = 2 the lower search must solve inside the quadratic piece
  const PlqFunction mix = PlqFunction::validate(
      {{1.0, 1.0, 0.0, 0.0}, {kInf, 0.0, 2.0, -1.0}});
  s = eps_subdifferential(mix, 2.0, 0.5);
  CHECK(std::abs(s.lo - (4.0 - 2.0 * std::sqrt(1.5))) <= 1e-12);
  CHECK(std::abs(s.hi - 2.0) <= 1e-12);
}

TEST_CASE("degenerate shapes and argument errors") {
  const PlqFunction lin = plqtest::linear_fn(3.0, -1.0);
  for (const double x : {-100.0, 0.0, 42.0}) {
    const Interval s = eps_subdifferential(lin, x, 0.25);
    CHECK(s.lo == 3.0);
    CHECK(s.hi == 3.0);
  }

  const PlqFunction needle = plqtest::needle_fn(1.0, 2.0);
  Interval s = eps_subdifferential(needle, 1.0, 0.5);
  CHECK(s.lo == -kInf);
  CHECK(s.hi == kInf);
  CHECK(eps_subdifferential(needle, 1.25, 0.5).is_empty());
  CHECK(eps_subdifferential(plqtest::square_on_halfline(), -0.5, 1.0)
            .is_empty());

  CHECK_THROWS_AS((void)eps_subdifferential(plqtest::abs_fn(), 0.0, 0.0),
                  plq::Error);
  CHECK_THROWS_AS((void)eps_subdifferential(plqtest::abs_fn(), 0.0, -1.0),
                  plq::Error);
  CHECK_THROWS_AS((void)eps_subdifferential(plqtest::abs_fn(), 0.0, kInf),
                  plq::Error);
}

TEST_CASE("interval shrinks to the subdifferential as eps goes to zero") {
  const PlqFunction f = plq::generate_convex_plq(9, 77);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const double x = plqtest::uniform(rng, -6.0, 6.0);
    const Interval exact = f.subdifferential(x);
    const Interval tight = eps_subdifferential(f, x, 1e-12);
    CHECK(std::abs(tight.lo - exact.lo) <= 1e-5);
    CHECK(std::abs(tight.hi - exact.hi) <= 1e-5);
  }
}

TEST_CASE("matches the reference scan across the corpus") {
  std::mt19937_64 rng(13);
  for (const PlqFunction& f : plqtest::make_corpus(150, 41)) {
    for (const double eps : plqtest::kEpsGrid) {
      for (const double xbar : plqtest::query_points(f, 8, rng)) {
        const Interval fast = eps_subdifferential(f, xbar, eps);
        const Interval slow = plq::oracle::eps_sub_reference(f, xbar, eps);
        CHECK_MESSAGE(
            plqtest::intervals_match(fast, slow, 1e-8),
            "pieces=", f.piece_count(), " eps=", eps, " xbar=", xbar,
            " fast=[", fast.lo, ",", fast.hi, "] slow=[", slow.lo, ",",
            slow.hi, "]");
      }
    }
  }
}

TEST_CASE("mirror symmetry of the two endpoints") {
  std::mt19937_64 rng(29);
  for (const PlqFunction& f : plqtest::make_corpus(60, 57, 24)) {
    const PlqFunction h = f.reflect();
    for (const double eps : {0.1, 1.0}) {
      for (const double xbar : plqtest::query_points(f, 6, rng)) {
        const Interval sf = eps_subdifferential(f, xbar, eps);
        const Interval sh = eps_subdifferential(h, -xbar, eps);
        if (sf.is_empty()) {
          CHECK(sh.is_empty());
          continue;
        }
        CHECK(plqtest::endpoints_match(sf.hi, sh.lo == 0.0 ? 0.0 : -sh.lo,
                                       1e-10));
        CHECK(plqtest::endpoints_match(sf.lo, sh.hi == 0.0 ? 0.0 : -sh.hi,
                                       1e-10));
      }
    }
  }
}

TEST_CASE("bracket crossing search on explicit conjugates") {
  // f = x^2: f*(s) = s^2/4; the level line 1/4 crosses at -1 and 1
  const PlqFunction sq = plqtest::square_fn();
  const SupportLine level{0.0, 0.25};
  CHECK(std::abs(plq::intersection(sq, 0, 0, level, Side::left) + 1.0) <=
        1e-12);
  CHECK(std::abs(plq::intersection(sq, 0, 0, level, Side::right) - 1.0) <=
        1e-12);

  // |x|: vertex segment of breakpoint 0 spans slopes [-1, 1] at height 0
  const PlqFunction a = plqtest::abs_fn();
  const SupportLine tilted{0.5, 0.0};  // l(s) = s/2
  CHECK(std::abs(plq::intersection(a, 0, 1, tilted, Side::left)) <= 1e-12);
  CHECK(plq::intersection(a, 0, 1, tilted, Side::right) == 1.0);

  // a line strictly below the conjugate has no crossing
  const SupportLine below{0.0, -1.0};
  CHECK_THROWS_AS((void)plq::intersection(sq, 0, 0, below, Side::left),
                  plq::Error);
  // malformed bracket
  CHECK_THROWS_AS((void)plq::intersection(a, 0, 9, tilted, Side::left),
                  plq::Error);
}

TEST_CASE("support line and conjugate samples") {
  const PlqFunction a = plqtest::abs_fn();
  const SupportLine l = plq::support_line(a, 0.5, 0.5);
  CHECK(l.slope == 0.5);
  CHECK(l.intercept == 0.0);
  CHECK(l(2.0) == 1.0);
  CHECK_THROWS_AS((void)plq::support_line(plqtest::needle_fn(), 0.0, 0.5),
                  plq::Error);  // f(0) = +inf: no support line there

  const plq::ConjugatePoint p = plq::conjugate_point(a, 0);
  CHECK(p.x == 0.0);
  CHECK(p.s == -1.0);  // slope of row 0 at its breakpoint
  CHECK(p.ystar == 0.0);
  CHECK_THROWS_AS((void)plq::conjugate_point(a, 1), plq::Error);
}

TEST_CASE("concurrent pointwise queries equal the serial answers") {
  const PlqFunction f = plq::generate_convex_plq(25, 99);
  std::mt19937_64 rng(17);
  std::vector<double> xs;
  for (int k = 0; k < 200; ++k) xs.push_back(plqtest::uniform(rng, -15, 15));
  std::vector<Interval> serial;
  for (const double x : xs) serial.push_back(eps_subdifferential(f, x, 0.5));

  std::vector<std::future<bool>> workers;
  for (int w = 0; w < 8; ++w) {
    workers.push_back(std::async(std::launch::async, [&] {
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const Interval s = eps_subdifferential(f, xs[k], 0.5);
        if (s.lo != serial[k].lo || s.hi != serial[k].hi) return false;
      }
      return true;
    }));
  }
  for (auto& w : workers) CHECK(w.get());
}
