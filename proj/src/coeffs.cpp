#include "indefsl/coeffs.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "indefsl/errors.hpp"

namespace indefsl {

namespace {

// Measure of {x in [x0, x1] : a x^2 + b x + c < 0}, split analytically at the roots.
double quadratic_sublevel(double a, double b, double c, double x0, double x1) {
  std::array<double, 4> cuts{x0, x0, x0, x1};
  std::size_t n = 1;
  auto add = [&](double r) {
    if (r > x0 && r < x1) cuts[n++] = r;
  };
  if (a == 0.0) {
    if (b != 0.0) add(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc > 0.0) {
      const double qq = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      add(qq / a);
      if (qq != 0.0) add(c / qq);
    }
  }
  cuts[n++] = x1;
  std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(n));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    if ((a * m + b) * m + c < 0.0) total += cuts[i + 1] - cuts[i];
  }
  return total;
}

double max_abs_difference(const PiecewiseFn& f, double sign) {
  std::vector<double> grid(f.breakpoints().begin(), f.breakpoints().end());
  for (double x : f.breakpoints()) grid.push_back(-x);
  double r = 0.0;
  for (double x : grid) r = std::max(r, std::abs(f(x) - sign * f(-x)));
  return r;
}

// min |w| over [a, b].
double min_abs_on(const PiecewiseFn& w, double a, double b) {
  double m = std::min(std::abs(w(a)), std::abs(w(b)));
  for (std::size_t i = 0; i < w.segment_count(); ++i) {
    const auto s = w.segment(i);
    const double lo = std::max(a, s.x0), hi = std::min(b, s.x1);
    if (lo > hi) continue;
    const double u = s.at(lo), v = s.at(hi);
    if ((u <= 0.0 && v >= 0.0) || (u >= 0.0 && v <= 0.0)) return 0.0;
    m = std::min({m, std::abs(u), std::abs(v)});
  }
  return m;
}

}  // namespace

double q_minus_l1(const PiecewiseFn& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < q.segment_count(); ++i) {
    const auto s = q.segment(i);
    const double a = -s.v0, b = -s.v1;  // q_- is the positive part of -q
    if (a >= 0.0 && b >= 0.0) {
      total += 0.5 * (a + b) * s.length();
    } else if (a > 0.0 || b > 0.0) {
      const double pos = std::max(a, b);
      total += 0.5 * pos * s.length() * pos / (std::abs(a) + std::abs(b));
    }
  }
  return total;
}

bool has_single_turning_point(const PiecewiseFn& w) {
  const double tol = 1e-14 * std::max(1.0, w.max_abs());
  for (std::size_t i = 0; i < w.segment_count(); ++i) {
    const auto s = w.segment(i);
    if (s.v0 == 0.0 && s.v1 == 0.0) return false;
    // g(x) = x w(x) = a x^2 + b x on the segment; check its minimum.
    const double a = s.slope(), b = s.v0 - a * s.x0;
    double gmin = std::min(s.x0 * s.v0, s.x1 * s.v1);
    if (a > 0.0) {
      const double xv = -b / (2.0 * a);
      if (xv > s.x0 && xv < s.x1) gmin = std::min(gmin, (a * xv + b) * xv);
    }
    if (gmin < -tol) return false;
  }
  return true;
}

double m1(const PiecewiseFn& w, double eps) {
  if (!has_single_turning_point(w)) throw HypothesisError("xw(x)>0 a.e. fails");
  double total = 0.0;
  for (std::size_t i = 0; i < w.segment_count(); ++i) {
    const auto s = w.segment(i);
    const double a = s.slope();
    total += quadratic_sublevel(a, s.v0 - a * s.x0, -eps, s.x0, s.x1);
  }
  return total;
}

double m2(const PiecewiseFn& w, double eps) {
  if (!(eps > 0.0)) return 0.0;
  const double r = std::sqrt(eps);
  double total = 0.0;
  for (std::size_t i = 0; i < w.segment_count(); ++i) {
    const auto s = w.segment(i);
    const double k = s.slope();
    if (k == 0.0) {
      if (std::abs(s.v0) < r) total += s.length();
      continue;
    }
    double lo = s.x0 + (-r - s.v0) / k, hi = s.x0 + (r - s.v0) / k;
    if (lo > hi) std::swap(lo, hi);
    lo = std::max(lo, s.x0);
    hi = std::min(hi, s.x1);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

NormData norms(const Problem& p) {
  NormData n;
  n.q_minus_l1 = q_minus_l1(p.q());
  n.w_sup = p.w().max_abs();
  double slope2 = 0.0;
  for (std::size_t i = 0; i < p.w().segment_count(); ++i) {
    const auto s = p.w().segment(i);
    slope2 += s.slope() * s.slope() * s.length();
  }
  n.wprime_l2 = std::sqrt(slope2);
  n.q0 = p.q().min_value();
  if (auto h = p.sign_ramp_half_width())
    n.w0 = std::min(min_abs_on(p.w(), -1.0, -*h), min_abs_on(p.w(), *h, 1.0));
  else
    n.w0 = min_abs_on(p.w(), -1.0, 1.0);
  return n;
}

Problem::Problem(PiecewiseFn q, PiecewiseFn w, std::optional<double> ramp)
    : q_(std::move(q)), w_(std::move(w)), ramp_(ramp), grid_(merged_breakpoints(q_, w_)) {
  for (std::size_t i = 0; i < w_.segment_count(); ++i) {
    const auto s = w_.segment(i);
    if (s.v0 == 0.0 && s.v1 == 0.0)
      throw InputError("w vanishes identically on [" + std::to_string(s.x0) + ", " +
                       std::to_string(s.x1) + "]");
  }
  flags_.w_nonvanishing_ae = true;
  flags_.single_turning_point = has_single_turning_point(w_);
  const double rq = max_abs_difference(q_, 1.0);
  const double rw = max_abs_difference(w_, -1.0);
  flags_.symmetry_residual = std::max(rq, rw);
  flags_.symmetric = flags_.symmetry_residual <= kSymmetryTolerance;
  const NormData nd = norms(*this);
  flags_.q_lower_bound = nd.q0;
  if (nd.w0 > 0.0) flags_.w_lower_bound = nd.w0;
}

Problem detect_flags(PiecewiseFn q, PiecewiseFn w) {
  return Problem(std::move(q), std::move(w), std::nullopt);
}

Problem richardson(double mu, double ramp_half_width) {
  if (!std::isfinite(mu)) throw InputError("mu must be finite");
  return Problem(PiecewiseFn::constant(-mu), PiecewiseFn::sign_ramp(ramp_half_width),
                 ramp_half_width);
}

}  // namespace indefsl
