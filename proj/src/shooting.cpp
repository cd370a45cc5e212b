#include "indefsl/shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dopri5.hpp"
#include "indefsl/errors.hpp"
#include "magnus.hpp"

namespace indefsl {

cplx Shot::value() const { return miss * std::exp(log_scale); }
cplx Shot::derivative() const { return miss_prime * std::exp(log_scale); }

namespace {

using detail::kGaussOffset;
using detail::magnus_step;
using detail::MagnusStep;
using State = std::array<cplx, 4>;  // y, y', z, z'

constexpr long kMaxSteps = 20'000'000;

// q and w restricted to one cell of the merged grid, where both are linear.
struct Cell {
  double x0, x1;
  double q0, qs;
  double w0, ws;
  double q(double x) const { return q0 + qs * (x - x0); }
  double w(double x) const { return w0 + ws * (x - x0); }
};

std::vector<Cell> cells_of(const std::vector<double>& grid, const PiecewiseFn& q,
                           const PiecewiseFn& w) {
  std::vector<Cell> cells;
  cells.reserve(grid.size());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    const double qa = q(a), qb = q(b), wa = w(a), wb = w(b);
    cells.push_back({a, b, qa, (qb - qa) / (b - a), wa, (wb - wa) / (b - a)});
  }
  return cells;
}

struct Scaled {
  State v{};
  double log_scale = 0.0;

  void renormalize() {
    double m = 0.0;
    for (const auto& c : v) m = std::max({m, std::abs(c.real()), std::abs(c.imag())});
    if (m > 1e100 || (m > 0.0 && m < 1e-100)) {
      const int e = std::ilogb(m);
      for (auto& c : v) c = std::ldexp(c.real(), -e) + cplx(0, 1) * std::ldexp(c.imag(), -e);
      log_scale += e * std::numbers::ln2;
    }
  }
};

State apply(const MagnusStep& s, const State& v, bool with_derivative) {
  const auto& e = s.e;
  State r;
  r[0] = e.a00 * v[0] + e.a01 * v[1];
  r[1] = e.a10 * v[0] + e.a11 * v[1];
  if (with_derivative) {
    const auto& l = s.l;
    r[2] = l.a00 * v[0] + l.a01 * v[1] + e.a00 * v[2] + e.a01 * v[3];
    r[3] = l.a10 * v[0] + l.a11 * v[1] + e.a10 * v[2] + e.a11 * v[3];
  } else {
    r[2] = r[3] = 0.0;
  }
  return r;
}

MagnusStep cell_step(const Cell& c, cplx lambda, double x, double h, bool with_derivative) {
  const double xa = x + h * (0.5 - kGaussOffset), xb = x + h * (0.5 + kGaussOffset);
  const double wa = c.w(xa), wb = c.w(xb);
  return magnus_step(h, c.q(xa) - lambda * wa, c.q(xb) - lambda * wb, wa, wb, with_derivative);
}

// Weighted relative difference between two states; y' is compared against kappa*y.
double state_error(const State& a, const State& b, double kappa, double lambda_abs,
                   bool with_derivative) {
  auto pair_norm = [&](cplx u, cplx du) { return std::max(std::abs(u) * kappa, std::abs(du)); };
  const double ny = pair_norm(b[0], b[1]);
  const double ey = pair_norm(a[0] - b[0], a[1] - b[1]);
  double err = ny > 0.0 ? ey / ny : ey;
  if (with_derivative) {
    const double nz = pair_norm(b[2], b[3]) + ny / (1.0 + lambda_abs);
    const double ez = pair_norm(a[2] - b[2], a[3] - b[3]);
    err = std::max(err, nz > 0.0 ? ez / nz : ez);
  }
  return err;
}

[[noreturn]] void underflow(cplx lambda, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "step-size underflow at x=" << x << " for lambda=" << lambda;
  throw NumericalError(os.str());
}

// Advances st across [x_from, x_to] inside one cell with step-doubling control.
// `h` carries the step-size proposal between calls.
void advance_magnus(Scaled& st, const Cell& c, cplx lambda, double x_from, double x_to,
                    double tol, bool with_derivative, double& h, int& steps) {
  const double lam_abs = std::abs(lambda);
  double x = x_from;
  while (x < x_to) {
    bool last = false;
    if (x + h >= x_to || x_to - (x + h) < 1e-3 * h) {
      h = x_to - x;
      last = true;
    }
    const MagnusStep full = cell_step(c, lambda, x, h, with_derivative);
    const MagnusStep h1 = cell_step(c, lambda, x, 0.5 * h, with_derivative);
    const MagnusStep h2 = cell_step(c, lambda, x + 0.5 * h, 0.5 * h, with_derivative);
    State coarse = apply(full, st.v, with_derivative);
    const State fine = apply(h2, apply(h1, st.v, with_derivative), with_derivative);
    const double rel = std::exp(full.shift - h1.shift - h2.shift);
    for (auto& u : coarse) u *= rel;
    const double fmid = std::abs(c.q(x + 0.5 * h) - lambda * c.w(x + 0.5 * h));
    const double kappa = std::sqrt(1.0 + fmid);
    const double err = state_error(coarse, fine, kappa, lam_abs, with_derivative) / 15.0;
    // Error per unit length, so local errors sum to about tol over [-1, 1]; the floor
    // keeps the target above the round-off level of the estimate.
    const double target = std::max(4.0 * tol * h, 1e-15);
    const double factor = err > 0.0 ? 0.9 * std::pow(target / err, 0.25) : 5.0;
    if (err <= target) {
      st.v = fine;
      st.log_scale += h1.shift + h2.shift;
      st.renormalize();
      if (++steps > kMaxSteps) throw NumericalError("step budget exhausted");
      x = last ? x_to : x + h;
      h *= std::clamp(factor, 0.2, 5.0);
    } else {
      const double hs = h * std::clamp(std::isfinite(factor) ? factor : 0.2, 0.1, 0.9);
      if (hs < 1e-14 * std::max(1.0, std::abs(x))) underflow(lambda, x);
      h = hs;
    }
  }
}

void advance_rk(Scaled& st, const Cell& c, cplx lambda, double x_from, double x_to, double tol,
                double& h, int& steps) {
  const double lam_abs = std::abs(lambda);
  auto rhs = [&](double x, const State& v) {
    const cplx f = c.q(x) - lambda * c.w(x);
    return State{v[1], f * v[0], v[3], f * v[2] - c.w(x) * v[0]};
  };
  double x = x_from;
  while (x < x_to) {
    bool last = false;
    if (x + h >= x_to || x_to - (x + h) < 1e-3 * h) {
      h = x_to - x;
      last = true;
    }
    const auto r = detail::dopri5_step<cplx, 4>(rhs, x, h, st.v);
    State lo = r.y;
    for (std::size_t i = 0; i < 4; ++i) lo[i] -= r.err[i];
    const double fmid = std::abs(c.q(x + 0.5 * h) - lambda * c.w(x + 0.5 * h));
    const double err = state_error(lo, r.y, std::sqrt(1.0 + fmid), lam_abs, true);
    const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    if (err <= tol) {
      st.v = r.y;
      st.renormalize();
      if (++steps > kMaxSteps) throw NumericalError("step budget exhausted");
      x = last ? x_to : x + h;
      h *= std::clamp(factor, 0.2, 5.0);
    } else {
      const double hs = h * std::clamp(std::isfinite(factor) ? factor : 0.2, 0.1, 0.9);
      if (hs < 1e-14 * std::max(1.0, std::abs(x))) underflow(lambda, x);
      h = hs;
    }
  }
}

}  // namespace

Shot shoot(const Problem& p, cplx lambda, double tol, Integrator method) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw InputError("shooting tolerance must lie in [1e-13, 1e-6]");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw InputError("lambda must be finite");
  const auto cells = cells_of(p.breakpoints(), p.q(), p.w());
  Scaled st;
  st.v = {0.0, 1.0, 0.0, 0.0};
  int steps = 0;
  double h = 0.1 / std::sqrt(1.0 + std::abs(lambda));
  for (const Cell& c : cells) {
    h = std::min(std::max(h, 1e-3 * (c.x1 - c.x0)), c.x1 - c.x0);
    if (method == Integrator::magnus)
      advance_magnus(st, c, lambda, c.x0, c.x1, tol, true, h, steps);
    else
      advance_rk(st, c, lambda, c.x0, c.x1, tol, h, steps);
  }
  Shot s;
  s.lambda = lambda;
  s.miss = st.v[0];
  s.miss_prime = st.v[2];
  s.log_scale = st.log_scale;
  s.steps = steps;
  s.tol_used = tol;
  return s;
}

Trajectory trajectory(const Problem& p, cplx lambda, int uniform_intervals) {
  if (uniform_intervals <= 0) {
    const double need = 100.0 * std::sqrt(1.0 + std::abs(lambda));
    uniform_intervals = std::max(2000, 2 * static_cast<int>(std::ceil(0.5 * need)));
  }
  if (uniform_intervals % 2) ++uniform_intervals;
  const int m = uniform_intervals;

  // Uniform nodes within 1e-12 of a breakpoint are dropped in its favour; otherwise a
  // sub-ulp interval would stall the integrator.
  const std::vector<double>& bp = p.breakpoints();
  std::vector<double> nodes(bp);
  for (int k = 1; k < m; ++k) {
    const double xk = -1.0 + 2.0 * k / m;
    auto it = std::lower_bound(bp.begin(), bp.end(), xk);
    const bool near = (it != bp.end() && *it - xk < 1e-12) ||
                      (it != bp.begin() && xk - *std::prev(it) < 1e-12);
    if (!near) nodes.push_back(xk);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  Trajectory t;
  t.lambda = lambda;
  std::vector<double> scales;
  const auto cells = cells_of(p.breakpoints(), p.q(), p.w());
  std::size_t ci = 0;
  Scaled st;
  st.v = {0.0, 1.0, 0.0, 0.0};
  int steps = 0;
  double h = 0.1 / std::sqrt(1.0 + std::abs(lambda));
  auto record = [&](double x) {
    t.x.push_back(x);
    t.y.push_back(st.v[0]);
    t.dy.push_back(st.v[1]);
    scales.push_back(st.log_scale);
  };
  record(-1.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i], b = nodes[i + 1], mid = 0.5 * (a + b);
    while (cells[ci].x1 <= a) ++ci;
    h = std::min(h, b - a);
    advance_magnus(st, cells[ci], lambda, a, mid, 1e-12, false, h, steps);
    record(mid);
    h = std::min(h, b - mid);
    advance_magnus(st, cells[ci], lambda, mid, b, 1e-12, false, h, steps);
    record(b);
  }
  const double top = *std::max_element(scales.begin(), scales.end());
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const double f = std::exp(scales[i] - top);
    t.y[i] *= f;
    t.dy[i] *= f;
  }
  for (int k = 0; k <= m; ++k) {
    const double xk = k == m ? 1.0 : -1.0 + 2.0 * k / m;
    auto it = std::lower_bound(t.x.begin(), t.x.end(), xk);
    if (it == t.x.end() || (it != t.x.begin() && xk - *std::prev(it) < *it - xk)) --it;
    t.uniform.push_back(static_cast<std::size_t>(it - t.x.begin()));
  }
  return t;
}

namespace {

using RState = std::array<double, 2>;

// Real-valued adaptive RK integration of u' = F(x, u) over the merged grid.
template <std::size_t N, class Rhs, class OnStep>
void integrate_real(const std::vector<double>& grid, std::array<double, N>& u, double tol,
                    const Rhs& rhs_for_cell, const OnStep& on_step) {
  double h = 0.05;
  double umax = 1.0;
  for (std::size_t ci = 0; ci + 1 < grid.size(); ++ci) {
    const double x0 = grid[ci], x1 = grid[ci + 1];
    auto rhs = rhs_for_cell(ci);
    double x = x0;
    h = std::min(h, x1 - x0);
    while (x < x1) {
      bool last = false;
      if (x + h >= x1 || x1 - (x + h) < 1e-3 * h) {
        h = x1 - x;
        last = true;
      }
      const auto r = detail::dopri5_step<double, N>(rhs, x, h, u);
      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc = tol * std::max({std::abs(u[i]), std::abs(r.y[i]), 1e-3 * umax});
        err = std::max(err, std::abs(r.err[i]) / sc);
      }
      if (err <= 1.0) {
        const double xn = last ? x1 : x + h;
        on_step(x, xn, u, r.y, rhs);
        u = r.y;
        for (double v : u) umax = std::max(umax, std::abs(v));
        x = xn;
        h *= std::clamp(err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0, 0.2, 5.0);
      } else {
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        if (h < 1e-14) throw NumericalError("step-size underflow in oscillation count");
      }
    }
  }
}

// Cubic Hermite interpolant of y on [a, b] from values and slopes.
double hermite(double a, double b, double ya, double da, double yb, double db, double x) {
  const double h = b - a, t = (x - a) / h, t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ya + (t3 - 2 * t2 + t) * h * da + (-2 * t3 + 3 * t2) * yb +
         (t3 - t2) * h * db;
}

}  // namespace

OscillationCount oscillation_count(const PiecewiseFn& q, const PiecewiseFn& weight, double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw InputError("tolerance must lie in [1e-13, 1e-6]");
  for (double v : weight.values())
    if (v < 0.0) throw InputError("oscillation weight must be nonnegative");
  const std::vector<double> grid = merged_breakpoints(q, weight);
  const auto cells = cells_of(grid, q, weight);
  constexpr double lambda = 0.0;
  constexpr double boundary_band = 1e-12;

  OscillationCount out;
  // Sign changes of y with y(-1) = 0, y'(-1) = 1.
  RState u{0.0, 1.0};
  int sign = 1;
  double ymax = 0.0;
  double last_zero = -1.0;
  integrate_real<2>(
      grid, u, tol,
      [&](std::size_t ci) {
        const Cell c = cells[ci];
        return [c](double x, const RState& v) {
          return RState{v[1], (c.q(x) - lambda * c.w(x)) * v[0]};
        };
      },
      [&](double a, double b, const RState& ua, const RState& ub, const auto&) {
        ymax = std::max(ymax, std::abs(ub[0]));
        if (ub[0] == 0.0) return;
        const int s = ub[0] > 0.0 ? 1 : -1;
        if (s == sign) return;
        // Locate the zero on the dense output.
        double lo = a, hi = b;
        const double ya = ua[0];
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double ym = hermite(a, b, ua[0], ua[1], ub[0], ub[1], mid);
          if ((ym > 0.0) == (ya > 0.0) && ym != 0.0) lo = mid; else hi = mid;
        }
        sign = s;
        if (0.5 * (lo + hi) < 1.0 - boundary_band) {
          ++out.sign_change_count;
          last_zero = 0.5 * (lo + hi);
        }
      });
  out.endpoint_value = u[0];
  out.max_abs = ymax;
  out.lambda_is_eigenvalue = std::abs(u[0]) <= 1e-8 * ymax;
  // At an eigenvalue y(1) sits at the integration-error level, so a zero found just
  // inside x = 1 is the boundary zero itself.
  if (out.lambda_is_eigenvalue && last_zero > 1.0 - 1e-6) --out.sign_change_count;

  // Pruefer angle: y = r sin(theta), y' = r cos(theta), theta' = cos^2 - (q - lambda w) sin^2.
  std::array<double, 1> theta{0.0};
  integrate_real<1>(
      grid, theta, tol,
      [&](std::size_t ci) {
        const Cell c = cells[ci];
        return [c](double x, const std::array<double, 1>& t) {
          const double s = std::sin(t[0]), co = std::cos(t[0]);
          return std::array<double, 1>{co * co - (c.q(x) - lambda * c.w(x)) * s * s};
        };
      },
      [](double, double, const auto&, const auto&, const auto&) {});
  const double turns = theta[0] / std::numbers::pi;
  out.pruefer_count = out.lambda_is_eigenvalue
                          ? std::max(0, static_cast<int>(std::lround(turns)) - 1)
                          : std::max(0, static_cast<int>(std::ceil(turns - boundary_band)) - 1);

  if (out.pruefer_count != out.sign_change_count) {
    std::ostringstream os;
    os << "oscillation counts disagree: sign changes " << out.sign_change_count << ", Pruefer "
       << out.pruefer_count;
    throw NumericalError(os.str());
  }
  out.zeros_interior = out.sign_change_count;
  return out;
}

OscillationCount negative_eigenvalue_count(const PiecewiseFn& q, const PiecewiseFn& weight,
                                           double tol) {
  OscillationCount c = oscillation_count(q, weight, tol);
  if (c.lambda_is_eigenvalue)
    throw HypothesisError("0 is a Dirichlet eigenvalue of the definite problem");
  return c;
}

}  // namespace indefsl
