#include "indefsl/oracle.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "indefsl/errors.hpp"

namespace indefsl {

namespace {

using cplx = std::complex<double>;

// Solves (A - lambda W) x = b in place. An exactly singular pivot (lambda hitting an
// eigenvalue to the last bit) is avoided by a relative nudge of lambda.
void tridiagonal_solve(const Discretization& d, cplx lambda, std::vector<cplx>& b) {
  const int n = d.n;
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<lapack_complex_double> dl(n - 1, d.a_off), du(n - 1, d.a_off), dd(n), rhs(n);
    for (int i = 0; i < n; ++i) {
      dd[i] = d.a_diag[i] - lambda * d.w_diag[i];
      rhs[i] = b[i];
    }
    const lapack_int info =
        LAPACKE_zgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), dd.data(), du.data(), rhs.data(), n);
    if (info == 0) {
      for (int i = 0; i < n; ++i) b[i] = rhs[i];
      return;
    }
    lambda *= 1.0 + 1e-13;
  }
  throw NumericalError("tridiagonal solve in inverse iteration failed");
}

double eigen_residual(const Discretization& d, cplx lambda) {
  const int n = d.n;
  std::vector<cplx> v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * std::sin(1.7 * i);
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 3; ++it) {
    tridiagonal_solve(d, lambda, v);
    double nrm = 0.0;
    for (const cplx& z : v) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
    for (cplx& z : v) z /= nrm;
    double r = 0.0, av = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx a = d.a_diag[i] * v[i];
      if (i > 0) a += d.a_off * v[i - 1];
      if (i + 1 < n) a += d.a_off * v[i + 1];
      r += std::norm(a - lambda * d.w_diag[i] * v[i]);
      av += std::norm(a);
    }
    best = std::min(best, std::sqrt(r / av));
    if (best < 1e-13) break;
  }
  return best;
}

}  // namespace

Discretization discretize(const Problem& p, int n) {
  if (n < 16) throw InputError("oracle grid needs n >= 16");
  Discretization d;
  d.n = n;
  d.h = 2.0 / (n + 1);
  d.a_off = -1.0 / (d.h * d.h);
  d.grid.resize(n);
  d.a_diag.resize(n);
  d.w_diag.resize(n);
  const double scale = p.w().max_abs();
  for (int i = 0; i < n; ++i) {
    double x = -1.0 + (i + 1) * d.h;
    double wx = p.w()(x);
    if (std::abs(wx) <= 1e-14 * scale) {
      x += d.h / 100.0;
      wx = p.w()(x);
      ++d.shifted_nodes;
      if (wx == 0.0) {
        std::ostringstream os;
        os << "w vanishes at and next to the grid node " << x;
        throw InputError(os.str());
      }
    }
    d.grid[i] = x;
    d.w_diag[i] = wx;
    d.a_diag[i] = 2.0 / (d.h * d.h) + p.q()(x);
  }
  return d;
}

OracleSpectrum eigen_all(const Discretization& d) {
  const int n = d.n;
  std::vector<double> hmat(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [&](int i, int j) -> double& { return hmat[static_cast<std::size_t>(j) * n + i]; };
  for (int i = 0; i < n; ++i) {
    at(i, i) = d.a_diag[i] / d.w_diag[i];
    if (i > 0) at(i, i - 1) = d.a_off / d.w_diag[i];
    if (i + 1 < n) at(i, i + 1) = d.a_off / d.w_diag[i];
  }
  // W^{-1} A is tridiagonal, hence already upper Hessenberg.
  std::vector<double> wr(n), wi(n);
  double z_dummy = 0.0;
  const lapack_int info = LAPACKE_dhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, hmat.data(), n,
                                         wr.data(), wi.data(), &z_dummy, 1);
  if (info != 0) {
    std::ostringstream os;
    os << "Hessenberg QR failed to converge (dhseqr info " << info << ")";
    throw NumericalError(os.str());
  }
  OracleSpectrum out;
  out.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) out.eigenvalues[i] = {wr[i], wi[i]};
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  out.residuals.resize(n);
  for (int i = 0; i < n; ++i) {
    out.residuals[i] = eigen_residual(d, out.eigenvalues[i]);
    out.max_residual = std::max(out.max_residual, out.residuals[i]);
  }
  if (!(out.max_residual <= 1e-8)) {
    std::ostringstream os;
    os << "oracle eigenvector residual " << out.max_residual << " exceeds 1e-8";
    throw NumericalError(os.str());
  }
  return out;
}

bool is_nonreal(cplx lambda) { return std::abs(lambda.imag()) > 1e-6 * (1.0 + std::abs(lambda)); }

std::vector<cplx> nonreal_eigenvalues(const OracleSpectrum& s) {
  std::vector<cplx> out;
  for (const cplx& z : s.eigenvalues)
    if (is_nonreal(z)) out.push_back(z);
  return out;
}

int definite_negative_count(const Discretization& d) {
  const int n = d.n;
  std::vector<double> diag(n), off(std::max(0, n - 1));
  for (int i = 0; i < n; ++i) diag[i] = d.a_diag[i] / std::abs(d.w_diag[i]);
  for (int i = 0; i + 1 < n; ++i)
    off[i] = d.a_off / std::sqrt(std::abs(d.w_diag[i] * d.w_diag[i + 1]));
  double z_dummy = 0.0;
  const lapack_int info =
      LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', n, diag.data(), off.data(), &z_dummy, 1);
  if (info != 0) throw NumericalError("symmetric tridiagonal eigensolver failed");
  return static_cast<int>(std::count_if(diag.begin(), diag.end(), [](double v) { return v < 0.0; }));
}

RichardsonReference richardson_reference(double mu, int n) {
  if (n < 1000) throw InputError("richardson_reference needs n >= 1000");
  const Problem p = richardson(mu);
  auto upper = [&](int m, int& count, double& resid) {
    const OracleSpectrum s = eigen_all(discretize(p, m));
    const std::vector<cplx> nr = nonreal_eigenvalues(s);
    count = static_cast<int>(nr.size());
    resid = std::max(resid, s.max_residual);
    double a = 0.0;
    for (const cplx& z : nr) a = std::max(a, z.imag());
    return a;
  };
  RichardsonReference out;
  out.alpha = upper(n, out.count, out.max_residual);
  out.alphas[0] = out.alpha;
  const double lo = std::numbers::pi * std::numbers::pi / 4.0;
  const double hi = std::numbers::pi * std::numbers::pi;
  const bool expect_pair = mu > lo && mu < hi;
  if (expect_pair && out.count != 2) {
    std::ostringstream os;
    os << "expected exactly two non-real eigenvalues for mu = " << mu << ", oracle found "
       << out.count;
    throw HypothesisError(os.str());
  }
  if (out.count == 2) {
    int c = 0;
    out.alphas[1] = upper(2 * n, c, out.max_residual);
    out.alphas[2] = upper(4 * n, c, out.max_residual);
    out.converging = std::abs(out.alphas[0] - out.alphas[1]) <=
                     4.0 * std::abs(out.alphas[1] - out.alphas[2]);
  }
  return out;
}

}  // namespace indefsl
