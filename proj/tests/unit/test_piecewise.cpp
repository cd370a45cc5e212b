#include <cmath>
#include <limits>

#include "doctest.h"
#include "indefsl/errors.hpp"
#include "indefsl/piecewise.hpp"

using indefsl::InputError;
using indefsl::PiecewiseFn;

TEST_CASE("piecewise: constructor validates the grid and values") {
  CHECK_NOTHROW(PiecewiseFn({-1.0, 1.0}, {0.0, 1.0}));
  CHECK_THROWS_AS(PiecewiseFn({-1.0}, {0.0}), InputError);
  CHECK_THROWS_AS(PiecewiseFn({-0.5, 1.0}, {0.0, 1.0}), InputError);
  CHECK_THROWS_AS(PiecewiseFn({-1.0, 0.9}, {0.0, 1.0}), InputError);
  CHECK_THROWS_AS(PiecewiseFn({-1.0, 0.2, 0.2, 1.0}, {0.0, 1.0, 1.0, 0.0}), InputError);
  CHECK_THROWS_AS(PiecewiseFn({-1.0, 0.5, 0.2, 1.0}, {0.0, 1.0, 1.0, 0.0}), InputError);
  CHECK_THROWS_AS(PiecewiseFn({-1.0, 1.0}, {0.0}), InputError);
  CHECK_THROWS_AS(PiecewiseFn({-1.0, 1.0}, {0.0, std::numeric_limits<double>::quiet_NaN()}),
                  InputError);
  CHECK_THROWS_AS(PiecewiseFn({-1.0, 1.0}, {std::numeric_limits<double>::infinity(), 0.0}),
                  InputError);
}

TEST_CASE("piecewise: evaluation interpolates linearly") {
  const PiecewiseFn f({-1.0, 0.0, 1.0}, {2.0, 0.0, 4.0});
  CHECK(f(-1.0) == doctest::Approx(2.0));
  CHECK(f(-0.5) == doctest::Approx(1.0));
  CHECK(f(0.0) == doctest::Approx(0.0));
  CHECK(f(0.25) == doctest::Approx(1.0));
  CHECK(f(1.0) == doctest::Approx(4.0));
  CHECK(f.segment_count() == 2);
  CHECK(f.segment(1).slope() == doctest::Approx(4.0));
  CHECK(f.min_value() == doctest::Approx(0.0));
  CHECK(f.max_abs() == doctest::Approx(4.0));
  CHECK(f.locate(0.0) == 0);
  CHECK(f.locate(0.3) == 1);
}

TEST_CASE("piecewise: factories") {
  const PiecewiseFn c = PiecewiseFn::constant(-3.0);
  CHECK(c(0.3) == doctest::Approx(-3.0));
  const PiecewiseFn l = PiecewiseFn::linear(-1.0, 1.0);
  CHECK(l(0.4) == doctest::Approx(0.4));
  const PiecewiseFn s = PiecewiseFn::sign_ramp(1e-6);
  CHECK(s(-0.5) == -1.0);
  CHECK(s(0.5) == 1.0);
  CHECK(s(0.0) == doctest::Approx(0.0));
  CHECK(s(5e-7) == doctest::Approx(0.5));
  CHECK_THROWS_AS(PiecewiseFn::sign_ramp(0.0), InputError);
  CHECK_THROWS_AS(PiecewiseFn::sign_ramp(1.0), InputError);
}

TEST_CASE("piecewise: reflection, refinement and absolute value preserve the function") {
  const PiecewiseFn f({-1.0, -0.2, 0.5, 1.0}, {1.0, -2.0, 3.0, -1.0});
  const PiecewiseFn r = f.reflected();
  const std::vector<double> extra{-0.7, 0.1, 0.9, 2.0, -1.0};
  const PiecewiseFn g = f.refined(extra);
  const PiecewiseFn a = f.absolute();
  CHECK(g.breakpoints().size() == f.breakpoints().size() + 3);
  for (double x = -1.0; x <= 1.0; x += 0.01) {
    CHECK(r(x) == doctest::Approx(f(-x)).epsilon(1e-12));
    CHECK(g(x) == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(a(x) == doctest::Approx(std::abs(f(x))).epsilon(1e-12));
  }
  // |f| stays piecewise linear: its minimum on every segment is at an endpoint.
  CHECK(a.min_value() == doctest::Approx(0.0));
}

TEST_CASE("piecewise: merged breakpoints are the sorted union") {
  const PiecewiseFn a({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
  const PiecewiseFn b({-1.0, -0.5, 0.0, 1.0}, {0.0, 1.0, 0.0, 1.0});
  const std::vector<double> m = indefsl::merged_breakpoints(a, b);
  REQUIRE(m.size() == 4);
  CHECK(m[0] == -1.0);
  CHECK(m[1] == -0.5);
  CHECK(m[2] == 0.0);
  CHECK(m[3] == 1.0);
}
