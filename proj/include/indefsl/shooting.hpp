#pragma once

#include <complex>
#include <vector>

#include "indefsl/coeffs.hpp"

namespace indefsl {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-10;

enum class Integrator {
  /// Fourth-order Magnus (two Gauss nodes) with closed-form 2x2 exponentials and
  /// step-doubling control. Exact on segments where q and w are constant.
  magnus,
  /// Dormand-Prince 5(4) embedded pair.
  runge_kutta,
};

/// Miss distance D(lambda) = y(1; lambda) of the solution with y(-1) = 0, y'(-1) = 1.
///
/// D and D' are stored as mantissas sharing the real scale factor exp(log_scale), so
/// phases and the ratio D'/D are available even when |D| overflows a double.
struct Shot {
  cplx lambda;
  cplx miss;
  cplx miss_prime;
  double log_scale = 0.0;
  int steps = 0;
  double tol_used = 0.0;

  cplx log_derivative() const { return miss_prime / miss; }
  /// Unscaled D; may overflow to inf for large |lambda|.
  cplx value() const;
  cplx derivative() const;
};

/// Integrates (y, y', z, z') with y'' = (q - lambda w) y and z'' = (q - lambda w) z - w y
/// from -1 to 1, stepping onto every breakpoint of q and w. Requires tol in [1e-13, 1e-6].
/// Throws NumericalError on step-size underflow.
Shot shoot(const Problem& p, cplx lambda, double tol = kDefaultTol,
           Integrator method = Integrator::magnus);

struct OscillationCount {
  /// Zeros of y(.; 0) in (-1, 1); equal to the sign-change and Pruefer counts.
  int zeros_interior = 0;
  /// |y(1; 0)| <= 1e-8 max |y|: 0 is itself a Dirichlet eigenvalue.
  bool lambda_is_eigenvalue = false;
  int sign_change_count = 0;
  int pruefer_count = 0;
  double endpoint_value = 0.0;
  double max_abs = 0.0;
};

/// Sturm oscillation count of -y'' + q y = lambda weight y at lambda = 0 (the number of
/// negative Dirichlet eigenvalues). Requires weight > 0 a.e.; throws NumericalError if the
/// sign-change and Pruefer-angle counts disagree.
OscillationCount oscillation_count(const PiecewiseFn& q, const PiecewiseFn& weight,
                                   double tol = kDefaultTol);

/// oscillation_count(), but throws HypothesisError when 0 is an eigenvalue.
OscillationCount negative_eigenvalue_count(const PiecewiseFn& q, const PiecewiseFn& weight,
                                           double tol = kDefaultTol);

/// Dirichlet solution sampled on a fine grid: every breakpoint, a uniform grid of
/// `uniform_intervals` intervals, and the midpoint of every resulting interval
/// (so Simpson's rule applies to consecutive triples).
struct Trajectory {
  cplx lambda;
  std::vector<double> x;
  std::vector<cplx> y;
  std::vector<cplx> dy;
  /// Indices into x of the uniform grid nodes -1 + 2k/uniform_intervals (a breakpoint
  /// within 1e-12 stands in for a uniform node).
  std::vector<std::size_t> uniform;
};

Trajectory trajectory(const Problem& p, cplx lambda, int uniform_intervals = 0);

}  // namespace indefsl
