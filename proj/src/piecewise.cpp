#include "indefsl/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "indefsl/errors.hpp"

namespace indefsl {

namespace {

void validate(const std::vector<double>& xs, const std::vector<double>& vs) {
  if (xs.size() < 2) throw InputError("piecewise function needs at least 2 breakpoints");
  if (xs.size() != vs.size())
    throw InputError("breakpoints and values differ in length (" + std::to_string(xs.size()) +
                     " vs " + std::to_string(vs.size()) + ")");
  if (xs.front() != -1.0 || xs.back() != 1.0)
    throw InputError("breakpoints must start at -1 and end at 1");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i] < xs[i + 1]))
      throw InputError("breakpoints not strictly increasing at index " + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (!std::isfinite(vs[i]) || !std::isfinite(xs[i]))
      throw InputError("non-finite entry at index " + std::to_string(i));
  }
}

}  // namespace

PiecewiseFn::PiecewiseFn(std::vector<double> breakpoints, std::vector<double> values)
    : xs_(std::move(breakpoints)), vs_(std::move(values)) {
  validate(xs_, vs_);
}

PiecewiseFn PiecewiseFn::constant(double c) { return PiecewiseFn({-1.0, 1.0}, {c, c}); }

PiecewiseFn PiecewiseFn::linear(double left, double right) {
  return PiecewiseFn({-1.0, 1.0}, {left, right});
}

PiecewiseFn PiecewiseFn::sign_ramp(double half_width) {
  if (!(half_width > 0.0 && half_width < 1.0))
    throw InputError("sign ramp half-width must lie in (0, 1)");
  return PiecewiseFn({-1.0, -half_width, half_width, 1.0}, {-1.0, -1.0, 1.0, 1.0});
}

std::size_t PiecewiseFn::locate(double x) const {
  auto it = std::lower_bound(xs_.begin() + 1, xs_.end() - 1, x);
  return static_cast<std::size_t>(it - xs_.begin()) - 1;
}

double PiecewiseFn::operator()(double x) const { return segment(locate(x)).at(x); }

double PiecewiseFn::min_value() const { return *std::min_element(vs_.begin(), vs_.end()); }

double PiecewiseFn::max_abs() const {
  double m = 0.0;
  for (double v : vs_) m = std::max(m, std::abs(v));
  return m;
}

PiecewiseFn PiecewiseFn::refined(std::span<const double> extra) const {
  std::vector<double> xs(xs_);
  for (double x : extra)
    if (x > -1.0 && x < 1.0) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> vs;
  vs.reserve(xs.size());
  for (double x : xs) {
    // Keep original values bit-exact at original breakpoints.
    auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    if (it != xs_.end() && *it == x)
      vs.push_back(vs_[static_cast<std::size_t>(it - xs_.begin())]);
    else
      vs.push_back((*this)(x));
  }
  return PiecewiseFn(std::move(xs), std::move(vs));
}

PiecewiseFn PiecewiseFn::reflected() const {
  std::vector<double> xs(xs_.size()), vs(vs_.size());
  const std::size_t n = xs_.size();
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = -xs_[n - 1 - i];
    vs[i] = vs_[n - 1 - i];
  }
  xs.front() = -1.0;
  xs.back() = 1.0;
  return PiecewiseFn(std::move(xs), std::move(vs));
}

PiecewiseFn PiecewiseFn::absolute() const {
  std::vector<double> crossings;
  for (std::size_t i = 0; i < segment_count(); ++i) {
    const Segment s = segment(i);
    if ((s.v0 < 0.0 && s.v1 > 0.0) || (s.v0 > 0.0 && s.v1 < 0.0))
      crossings.push_back(s.x0 + s.length() * s.v0 / (s.v0 - s.v1));
  }
  PiecewiseFn r = refined(crossings);
  for (std::size_t i = 0; i < r.xs_.size(); ++i) {
    auto it = std::find(crossings.begin(), crossings.end(), r.xs_[i]);
    r.vs_[i] = it != crossings.end() ? 0.0 : std::abs(r.vs_[i]);
  }
  return r;
}

std::vector<double> merged_breakpoints(const PiecewiseFn& a, const PiecewiseFn& b) {
  std::vector<double> xs(a.breakpoints().begin(), a.breakpoints().end());
  xs.insert(xs.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace indefsl
