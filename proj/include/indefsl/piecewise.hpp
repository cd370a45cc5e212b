#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace indefsl {

/// Continuous piecewise-linear real function on [-1, 1].
///
/// The function is given by its values on a strictly increasing breakpoint
/// grid that starts at -1 and ends at +1, and is linear in between.
class PiecewiseFn {
 public:
  struct Segment {
    double x0, x1;
    double v0, v1;
    double length() const { return x1 - x0; }
    double slope() const { return (v1 - v0) / (x1 - x0); }
    double at(double x) const { return v0 + (x - x0) * slope(); }
  };

  /// Throws InputError if the grid or the values violate the invariants.
  PiecewiseFn(std::vector<double> breakpoints, std::vector<double> values);

  static PiecewiseFn constant(double c);
  /// Straight line through (-1, left) and (1, right).
  static PiecewiseFn linear(double left, double right);
  /// Odd steep ramp modelling sgn(x): -1 on [-1,-h], +1 on [h,1], linear on [-h,h].
  static PiecewiseFn sign_ramp(double half_width);

  double operator()(double x) const;

  std::span<const double> breakpoints() const { return xs_; }
  std::span<const double> values() const { return vs_; }
  std::size_t segment_count() const { return xs_.size() - 1; }
  Segment segment(std::size_t i) const { return {xs_[i], xs_[i + 1], vs_[i], vs_[i + 1]}; }

  /// Index of the segment containing x (the left one at an interior breakpoint).
  std::size_t locate(double x) const;

  double min_value() const;
  double max_abs() const;

  /// Same function on the union of the current grid and `extra` (points outside (-1,1) ignored).
  PiecewiseFn refined(std::span<const double> extra) const;

  /// x -> f(-x).
  PiecewiseFn reflected() const;

  /// |f|, refined at sign crossings so the result is again piecewise linear.
  PiecewiseFn absolute() const;

 private:
  std::vector<double> xs_;
  std::vector<double> vs_;
};

/// Sorted union of the breakpoint grids of a and b.
std::vector<double> merged_breakpoints(const PiecewiseFn& a, const PiecewiseFn& b);

}  // namespace indefsl
