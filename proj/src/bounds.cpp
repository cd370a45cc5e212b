#include "indefsl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "indefsl/errors.hpp"

namespace indefsl {

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::xw_measure: return "xw_measure";
    case BoundKind::w2_measure: return "w2_measure";
    case BoundKind::symmetric_imaginary: return "symmetric_imaginary";
    case BoundKind::search_region: return "search_region";
  }
  return "unknown";
}

bool BoundBox::admits(std::complex<double> lam, double rel_slack) const {
  if (!applicable) return true;
  const double re_lim = re_max * (1.0 + rel_slack), im_lim = im_max * (1.0 + rel_slack);
  if (imaginary_axis_only) {
    if (std::abs(lam.real()) > 1e-8 * std::abs(lam)) return true;
    return std::abs(lam.imag()) <= im_lim;
  }
  return std::abs(lam.real()) <= re_lim && std::abs(lam.imag()) <= im_lim;
}

double epsilon_star(MeasureKind kind, const Problem& p, double margin) {
  if (!(margin > 0.0 && margin < 1.0)) throw InputError("margin must lie in (0, 1)");
  if (kind == MeasureKind::xw_sublevel && !p.flags().single_turning_point)
    throw HypothesisError("xw(x)>0 a.e. fails");
  const double qm = q_minus_l1(p.q());
  if (qm == 0.0) throw std::invalid_argument("||q_-||_1 = 0: every eps is admissible");

  const double w_sup = p.w().max_abs();
  const double cap = std::max(2.0 * w_sup, w_sup * w_sup);
  const double scale = 8.0 * qm * qm;
  auto holds = [&](double eps) {
    const double m = kind == MeasureKind::xw_sublevel ? m1(p.w(), eps) : m2(p.w(), eps);
    return scale * m <= 1.0 - margin;
  };

  double hi = 1.0;
  if (holds(hi)) {
    while (holds(hi)) {
      // Beyond sup(xw) or sup(w^2) the sublevel set is all of [-1, 1].
      if (hi > cap) return std::numeric_limits<double>::infinity();
      hi *= 2.0;
    }
  }
  double lo = hi;
  do {
    lo *= 0.5;
    if (lo < 1e-300) throw NumericalError("no admissible eps found");
  } while (!holds(lo));
  if (lo * 2.0 < hi) hi = lo * 2.0;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return lo;
}

namespace {

BoundBox zero_box(BoundKind kind, std::string reason) {
  BoundBox b;
  b.kind = kind;
  b.applicable = true;
  b.reason = std::move(reason);
  return b;
}

}  // namespace

BoundBox box_xw_measure(const Problem& p, double margin) {
  BoundBox b;
  b.kind = BoundKind::xw_measure;
  if (!p.flags().single_turning_point) {
    b.reason = "xw(x)>0 a.e. fails";
    return b;
  }
  const double qm = q_minus_l1(p.q());
  if (qm == 0.0) return zero_box(b.kind, "q_- = 0: no non-real eigenvalues");
  const double eps = epsilon_star(MeasureKind::xw_sublevel, p, margin);
  if (std::isinf(eps)) return zero_box(b.kind, "constraint holds for every eps: no non-real eigenvalues");
  b.applicable = true;
  b.eps_used = eps;
  b.re_max = 4.0 / eps * (qm + 4.0 * qm * qm);
  b.im_max = 4.0 / eps * qm;
  return b;
}

BoundBox box_w2_measure(const Problem& p, double margin) {
  BoundBox b;
  b.kind = BoundKind::w2_measure;
  const NormData n = norms(p);
  const double qm = n.q_minus_l1;
  if (qm == 0.0) return zero_box(b.kind, "q_- = 0: no non-real eigenvalues");
  double eps = 0.0;
  try {
    eps = epsilon_star(MeasureKind::w2_sublevel, p, margin);
  } catch (const NumericalError& e) {
    b.reason = e.what();
    return b;
  }
  if (std::isinf(eps)) return zero_box(b.kind, "constraint holds for every eps: no non-real eigenvalues");
  b.applicable = true;
  b.eps_used = eps;
  b.re_max = 8.0 / eps * qm * qm * (3.0 * n.w_sup + n.wprime_l2);
  b.im_max = 8.0 / eps * n.wprime_l2 * qm * qm;
  return b;
}

BoundBox imaginary_bound(const Problem& p) {
  BoundBox b;
  b.kind = BoundKind::symmetric_imaginary;
  b.imaginary_axis_only = true;
  const NormData n = norms(p);
  if (!p.flags().symmetric) {
    b.reason = "q not even or w not odd";
  } else if (!p.flags().single_turning_point) {
    b.reason = "xw(x)>0 a.e. fails";
  } else if (!(n.q0 < 0.0)) {
    b.reason = "q0 >= 0";
  } else if (!(n.w0 > 0.0)) {
    b.reason = "w0 = 0 (|w| not bounded away from zero)";
  } else if (auto h = p.sign_ramp_half_width(); h && !(*h < 1.0 / (-2.0 * n.q0))) {
    // The |w| >= w0 estimate is only needed on |x| >= 1/(-2 q0); the ramp must lie inside.
    b.reason = "sign ramp wider than 1/(-2 q0)";
  } else {
    b.applicable = true;
    b.im_max = 4.0 * std::pow(-n.q0, 1.5) / n.w0;
  }
  return b;
}

BoundBox search_region(const Problem& p, double margin) {
  BoundBox r;
  r.kind = BoundKind::search_region;
  if (q_minus_l1(p.q()) == 0.0) return zero_box(r.kind, "q_- = 0: no non-real eigenvalues");
  const BoundBox xw = box_xw_measure(p, margin);
  const BoundBox w2 = box_w2_measure(p, margin);
  if (!xw.applicable && !w2.applicable)
    throw HypothesisError("no applicable a priori box: " + xw.reason + "; " + w2.reason);
  r.applicable = true;
  r.re_max = std::numeric_limits<double>::infinity();
  r.im_max = std::numeric_limits<double>::infinity();
  const char* re_from = "";
  const char* im_from = "";
  for (const BoundBox* b : {&xw, &w2}) {
    if (!b->applicable) continue;
    if (b->re_max < r.re_max) {
      r.re_max = b->re_max;
      re_from = to_string(b->kind);
    }
    if (b->im_max < r.im_max) {
      r.im_max = b->im_max;
      im_from = to_string(b->kind);
    }
  }
  r.reason = std::string("re from ") + re_from + ", im from " + im_from;
  return r;
}

BoundsReport all_bounds(const Problem& p, double margin) {
  BoundsReport rep{box_xw_measure(p, margin), box_w2_measure(p, margin), imaginary_bound(p), {}};
  try {
    rep.region = search_region(p, margin);
  } catch (const HypothesisError& e) {
    rep.region.kind = BoundKind::search_region;
    rep.region.reason = e.what();
  }
  return rep;
}

}  // namespace indefsl
