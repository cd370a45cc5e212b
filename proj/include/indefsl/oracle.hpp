#pragma once

#include <array>
#include <complex>
#include <vector>

#include "indefsl/coeffs.hpp"

namespace indefsl {

/// Central-difference discretization of -y'' + q y = lambda w y with Dirichlet
/// elimination on the uniform grid x_i = -1 + i h, i = 1..n, h = 2/(n+1).
struct Discretization {
  int n = 0;
  double h = 0.0;
  std::vector<double> grid;    ///< interior nodes (after any shift)
  std::vector<double> a_diag;  ///< 2/h^2 + q(x_i)
  double a_off = 0.0;          ///< -1/h^2
  std::vector<double> w_diag;  ///< w(x_i), nonzero
  /// Number of nodes moved by h/100 because w vanished there.
  int shifted_nodes = 0;
};

/// Requires n >= 16.
Discretization discretize(const Problem& p, int n);

struct OracleSpectrum {
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by (Re, Im)
  /// ||A v - lambda W v|| / ||A v|| per eigenvalue from inverse iteration.
  std::vector<double> residuals;
  double max_residual = 0.0;
};

/// All n eigenvalues of A v = lambda W v via the Hessenberg QR algorithm on W^{-1} A.
/// Throws NumericalError on QR non-convergence or when an eigenvector residual
/// exceeds 1e-8.
OracleSpectrum eigen_all(const Discretization& d);

/// |Im lambda| > 1e-6 (1 + |lambda|).
bool is_nonreal(std::complex<double> lambda);

std::vector<std::complex<double>> nonreal_eigenvalues(const OracleSpectrum& s);

/// Number of negative eigenvalues of the definite pencil (A, |W|).
int definite_negative_count(const Discretization& d);

struct RichardsonReference {
  double alpha = 0.0;  ///< Im of the upper non-real eigenvalue at n (0 when count == 0)
  int count = 0;       ///< non-real eigenvalues at n
  std::array<double, 3> alphas{};  ///< alpha at n, 2n, 4n (only when count == 2)
  bool converging = false;         ///< |a(n) - a(2n)| <= 4 |a(2n) - a(4n)|
  double max_residual = 0.0;
};

/// Oracle reference for q = -mu, w = sgn. Requires n >= 1000. For mu in
/// (pi^2/4, pi^2) exactly two non-real eigenvalues are expected; any other count
/// there throws HypothesisError.
RichardsonReference richardson_reference(double mu, int n);

}  // namespace indefsl
