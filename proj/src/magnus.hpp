#pragma once

// Fourth-order Magnus step for u' = [[0, 1], [f(x), 0]] u together with its
// lambda-derivative, where f = q - lambda w and df/dlambda = -w.
//
// With Gauss nodes x1 < x2 of the step and k = sqrt(3)/12,
//   Omega = [[a, h], [h fbar, -a]],  a = k h^2 (f1 - f2),
//   Gamma = dOmega/dlambda = [[b, 0], [h cbar, -b]],  b = -k h^2 (w1 - w2), cbar = -wbar.
// Omega is traceless, so Omega^2 = r I with r = a^2 + h^2 fbar and
//   exp(Omega) = C(r) I + S(r) Omega,  C = cosh(sqrt r), S = sinh(sqrt r)/sqrt r.
// The lambda-derivative of exp(Omega) is
//   L = (S/2) r' I + S'(r) r' Omega + S Gamma,  r' = tr(Omega Gamma),  S' = (C - S)/(2r).
// Both are returned scaled by exp(-Re sqrt r); `shift` carries the exponent.

#include <cmath>
#include <complex>

namespace indefsl::detail {

using cplx = std::complex<double>;

struct Mat2 {
  cplx a00, a01, a10, a11;
};

struct MagnusStep {
  Mat2 e;      // scaled exp(Omega)
  Mat2 l;      // scaled d exp(Omega) / d lambda
  double shift = 0.0;
};

inline constexpr double kGaussOffset = 0.28867513459481288225;  // sqrt(3)/6
inline constexpr double kCommutator = 0.14433756729740644113;   // sqrt(3)/12

inline void series(cplx r, cplx& c, cplx& s, cplx& ds) {
  // C = sum r^k/(2k)!, S = sum r^k/(2k+1)!, S' = sum k r^(k-1)/(2k+1)!
  c = 0.0;
  s = 0.0;
  ds = 0.0;
  cplx pk = 1.0;  // r^k
  double fc = 1.0, fs = 1.0;  // (2k)!, (2k+1)!
  for (int k = 0; k < 14; ++k) {
    if (k > 0) {
      fc = fs * (2 * k);
      fs = fc * (2 * k + 1);
    }
    c += pk / fc;
    s += pk / fs;
    if (k + 1 < 14) ds += double(k + 1) * pk / (fs * (2 * k + 2) * (2 * k + 3));
    pk *= r;
  }
}

/// f1, f2 and w1, w2 are the values of f and w at the two Gauss nodes of a step of length h.
inline MagnusStep magnus_step(double h, cplx f1, cplx f2, double w1, double w2,
                              bool with_derivative) {
  const cplx alpha = kCommutator * h * h * (f1 - f2);
  const cplx fbar = 0.5 * (f1 + f2);
  const cplx r = alpha * alpha + h * h * fbar;

  cplx c, s, ds;
  double shift = 0.0;
  if (std::abs(r) < 0.25) {
    series(r, c, s, ds);
  } else {
    const cplx rho = std::sqrt(r);
    shift = rho.real();
    const cplx ep = std::polar(1.0, rho.imag());
    const cplx em = std::exp(-rho - shift);
    c = 0.5 * (ep + em);
    s = 0.5 * (ep - em) / rho;
    ds = (c - s) / (2.0 * r);
  }

  MagnusStep out;
  out.shift = shift;
  out.e = {c + s * alpha, s * h, s * h * fbar, c - s * alpha};
  if (with_derivative) {
    const double beta = -kCommutator * h * h * (w1 - w2);
    const double cbar = -0.5 * (w1 + w2);
    const cplx rp = 2.0 * alpha * beta + h * h * cbar;
    const cplx d0 = 0.5 * s * rp;
    const cplx d1 = ds * rp;
    out.l = {d0 + d1 * alpha + s * beta, d1 * h, d1 * h * fbar + s * h * cbar,
             d0 - d1 * alpha - s * beta};
  }
  return out;
}

}  // namespace indefsl::detail
