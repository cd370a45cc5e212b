#include <cmath>
#include <numbers>

#include "doctest.h"
#include "indefsl/bounds.hpp"
#include "indefsl/errors.hpp"

using namespace indefsl;

namespace {
const Problem& x_problem() {
  static const Problem p =
      detect_flags(PiecewiseFn::constant(-1.0), PiecewiseFn::linear(-1.0, 1.0));
  return p;
}
}  // namespace

TEST_CASE("bounds: epsilon_star examples") {
  CHECK(epsilon_star(MeasureKind::xw_sublevel, richardson(8.0)) ==
        doctest::Approx(2.4414e-4).epsilon(1e-4));
  CHECK(epsilon_star(MeasureKind::xw_sublevel, x_problem()) ==
        doctest::Approx(2.4414e-4).epsilon(1e-4));
  const Problem pos = detect_flags(PiecewiseFn::constant(1.0), PiecewiseFn::linear(-1.0, 1.0));
  CHECK_THROWS_AS(epsilon_star(MeasureKind::xw_sublevel, pos), std::invalid_argument);
  const Problem bad = detect_flags(PiecewiseFn::constant(-1.0), PiecewiseFn::linear(1.0, -1.0));
  CHECK_THROWS_AS(epsilon_star(MeasureKind::xw_sublevel, bad), HypothesisError);
}

TEST_CASE("bounds: epsilon_star satisfies the constraint and is maximal") {
  const Problem& p = x_problem();
  const double margin = kDefaultMargin;
  const double e = epsilon_star(MeasureKind::w2_sublevel, p, margin);
  const double q = 2.0;
  CHECK(8.0 * q * q * m2(p.w(), e) <= 1.0 - margin);
  CHECK(8.0 * q * q * m2(p.w(), e * (1.0 + 1e-9)) > 1.0 - margin);
}

TEST_CASE("bounds: xw-measure box examples") {
  const BoundBox b = box_xw_measure(richardson(8.0));
  REQUIRE(b.applicable);
  CHECK(b.re_max == doctest::Approx(1.7039e7).epsilon(1e-4));
  CHECK(b.im_max == doctest::Approx(2.6214e5).epsilon(1e-4));

  const Problem zero = detect_flags(PiecewiseFn::constant(0.0), PiecewiseFn::linear(-1.0, 1.0));
  const BoundBox z = box_xw_measure(zero);
  CHECK(z.applicable);
  CHECK(z.re_max == 0.0);
  CHECK(z.im_max == 0.0);

  const Problem neg = detect_flags(PiecewiseFn::constant(-1.0), PiecewiseFn::linear(1.0, -1.0));
  const BoundBox n = box_xw_measure(neg);
  CHECK_FALSE(n.applicable);
  CHECK(n.reason == "xw(x)>0 a.e. fails");
}

TEST_CASE("bounds: w2-measure box examples") {
  const BoundBox b = box_w2_measure(x_problem());
  REQUIRE(b.applicable);
  REQUIRE(b.eps_used.has_value());
  CHECK(*b.eps_used == doctest::Approx(2.4414e-4).epsilon(1e-4));
  CHECK(b.re_max == doctest::Approx(5.785e5).epsilon(1e-3));
  CHECK(b.im_max == doctest::Approx(1.8537e5).epsilon(1e-3));

  const Problem pos = detect_flags(PiecewiseFn::constant(2.0), PiecewiseFn::linear(-1.0, 1.0));
  CHECK(box_w2_measure(pos).empty());

  // Definite weight: m2 vanishes below 1, so eps reaches 1 and the box is finite.
  const Problem def = detect_flags(PiecewiseFn::constant(-1.0), PiecewiseFn::constant(1.0));
  const BoundBox d = box_w2_measure(def);
  REQUIRE(d.applicable);
  CHECK(*d.eps_used == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::isfinite(d.re_max));
}

TEST_CASE("bounds: imaginary-axis bound examples") {
  const BoundBox b8 = imaginary_bound(richardson(8.0));
  REQUIRE(b8.applicable);
  CHECK(b8.imaginary_axis_only);
  CHECK(b8.im_max == doctest::Approx(4.0 * std::pow(8.0, 1.5)));
  CHECK(b8.im_max == doctest::Approx(90.51).epsilon(1e-4));
  CHECK(imaginary_bound(richardson(4.0)).im_max == doctest::Approx(32.0));
  const Problem xw = detect_flags(PiecewiseFn::constant(-8.0), PiecewiseFn::linear(-1.0, 1.0));
  CHECK_FALSE(imaginary_bound(xw).applicable);
  const Problem pos = detect_flags(PiecewiseFn::constant(1.0), PiecewiseFn::sign_ramp(1e-6));
  CHECK_FALSE(imaginary_bound(pos).applicable);
  const Problem asym = detect_flags(PiecewiseFn::linear(-9.0, -8.0), PiecewiseFn::sign_ramp(1e-6));
  CHECK_FALSE(imaginary_bound(asym).applicable);
}

TEST_CASE("bounds: search region is the componentwise minimum") {
  const BoundsReport r = all_bounds(richardson(8.0));
  REQUIRE(r.region.applicable);
  CHECK(r.region.re_max == std::min(r.xw.re_max, r.w2.re_max));
  CHECK(r.region.im_max == std::min(r.xw.im_max, r.w2.im_max));

  const BoundsReport x = all_bounds(x_problem());
  CHECK(x.region.re_max == std::min(x.xw.re_max, x.w2.re_max));
  CHECK(x.region.im_max == std::min(x.xw.im_max, x.w2.im_max));

  const Problem pos = detect_flags(PiecewiseFn::constant(0.5), PiecewiseFn::linear(-1.0, 1.0));
  CHECK(search_region(pos).empty());
}

TEST_CASE("bounds: the w2 box survives a weight without a single turning point") {
  // w >= 0 with a double zero at 0: the xw box is inapplicable, but the w^2 sublevel
  // set shrinks to zero, so a (large) w2 box still exists.
  const Problem p = detect_flags(PiecewiseFn::constant(-10.0),
                                 PiecewiseFn({-1.0, 0.0, 1.0}, {1e-3, 0.0, 1e-3}));
  const BoundsReport r = all_bounds(p);
  CHECK_FALSE(r.xw.applicable);
  CHECK(r.w2.applicable);
  CHECK(r.region.applicable);
  CHECK(r.region.re_max == r.w2.re_max);
}

TEST_CASE("bounds: margin monotonicity") {
  const Problem& p = x_problem();
  double prev_eps = 1e300, prev_re = 0.0, prev_im = 0.0;
  for (double margin : {1e-9, 1e-6, 1e-3, 0.1, 0.5}) {
    const BoundBox b = box_w2_measure(p, margin);
    CHECK(*b.eps_used <= prev_eps);
    CHECK(b.re_max >= prev_re);
    CHECK(b.im_max >= prev_im);
    prev_eps = *b.eps_used;
    prev_re = b.re_max;
    prev_im = b.im_max;
  }
}

TEST_CASE("bounds: scaling q_- up never shrinks a box") {
  const PiecewiseFn w({-1.0, -0.3, 0.0, 0.6, 1.0}, {-1.5, -0.7, 0.0, 0.9, 1.2});
  const PiecewiseFn q0({-1.0, -0.2, 0.4, 1.0}, {0.5, -1.0, -0.3, 0.8});
  BoundsReport prev = all_bounds(detect_flags(q0, w));
  for (double t : {1.5, 2.0, 4.0, 8.0}) {
    std::vector<double> vs(q0.values().begin(), q0.values().end());
    for (double& v : vs)
      if (v < 0.0) v *= t;
    std::vector<double> xs(q0.breakpoints().begin(), q0.breakpoints().end());
    const BoundsReport cur = all_bounds(detect_flags(PiecewiseFn(xs, vs), w));
    CHECK(cur.xw.re_max >= prev.xw.re_max);
    CHECK(cur.xw.im_max >= prev.xw.im_max);
    CHECK(cur.w2.re_max >= prev.w2.re_max);
    CHECK(cur.w2.im_max >= prev.w2.im_max);
    prev = cur;
  }
}

TEST_CASE("bounds: admits honours slack and the imaginary-axis restriction") {
  BoundBox b;
  b.applicable = true;
  b.re_max = 1.0;
  b.im_max = 2.0;
  CHECK(b.admits({1.0, 2.0}));
  CHECK(b.admits({1.0 + 5e-7, 0.0}));
  CHECK_FALSE(b.admits({1.01, 0.0}));
  b.imaginary_axis_only = true;
  CHECK(b.admits({0.5, 30.0}));  // off the axis: no claim
  CHECK_FALSE(b.admits({0.0, 3.0}));
}
