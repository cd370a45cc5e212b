#pragma once

#include <optional>

#include "indefsl/piecewise.hpp"

namespace indefsl {

inline constexpr double kDefaultRampHalfWidth = 1e-6;
inline constexpr double kSymmetryTolerance = 1e-10;

struct ProblemFlags {
  bool w_nonvanishing_ae = false;
  /// x w(x) > 0 almost everywhere: one sign change of w, located at x = 0.
  bool single_turning_point = false;
  /// q even and w odd to within kSymmetryTolerance on the merged reflected grid.
  bool symmetric = false;
  std::optional<double> q_lower_bound;
  /// Present only when |w| is bounded away from zero (see NormData::w0).
  std::optional<double> w_lower_bound;
  double symmetry_residual = 0.0;
};

/// Dirichlet problem -y'' + q y = lambda w y on [-1, 1]. Flags are always
/// recomputed from (q, w); build instances with detect_flags() or richardson().
class Problem {
 public:
  const PiecewiseFn& q() const { return q_; }
  const PiecewiseFn& w() const { return w_; }
  const ProblemFlags& flags() const { return flags_; }

  /// Half-width of the steep ramp when w models sgn(x); absent for general w.
  std::optional<double> sign_ramp_half_width() const { return ramp_; }

  /// Sorted union of the q and w grids (the integrator's forced step boundaries).
  const std::vector<double>& breakpoints() const { return grid_; }

 private:
  Problem(PiecewiseFn q, PiecewiseFn w, std::optional<double> ramp);
  friend Problem detect_flags(PiecewiseFn q, PiecewiseFn w);
  friend Problem richardson(double mu, double ramp_half_width);

  PiecewiseFn q_;
  PiecewiseFn w_;
  ProblemFlags flags_;
  std::optional<double> ramp_;
  std::vector<double> grid_;
};

struct NormData {
  double q_minus_l1 = 0.0;  ///< integral of max(0, -q)
  double w_sup = 0.0;       ///< max |w|
  double wprime_l2 = 0.0;   ///< L2 norm of the piecewise-constant slope of w
  double q0 = 0.0;          ///< min q
  double w0 = 0.0;          ///< min |w|; the modelled sgn ramp is excluded (sgn limit)
};

double q_minus_l1(const PiecewiseFn& q);

/// Measure of {x : x w(x) < eps}. Throws HypothesisError unless x w(x) > 0 a.e.
double m1(const PiecewiseFn& w, double eps);

/// Measure of {x : w(x)^2 < eps}.
double m2(const PiecewiseFn& w, double eps);

bool has_single_turning_point(const PiecewiseFn& w);

NormData norms(const Problem& p);

/// Throws InputError if w vanishes identically on a subinterval.
Problem detect_flags(PiecewiseFn q, PiecewiseFn w);

/// q = -mu, w = sgn(x) modelled by a ramp of the given half-width.
Problem richardson(double mu, double ramp_half_width = kDefaultRampHalfWidth);

}  // namespace indefsl
