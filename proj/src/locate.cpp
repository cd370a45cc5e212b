#include "indefsl/locate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

#include "indefsl/errors.hpp"

namespace indefsl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRoundingSlack = 0.1;
constexpr std::array<double, 6> kPerturbations{0.0, 0.0031, -0.0047, 0.0067, -0.0083, 0.0097};
constexpr std::array<double, 5> kSplitOffsets{0.0, 0.0037, -0.0061, 0.0089, -0.0113};

Rect perturbed(const Rect& r, double f) {
  const double w = r.width(), h = r.height();
  Rect out = r;
  out.re_lo -= f * w;
  out.re_hi += f * w;
  out.im_hi += f * h;
  out.im_lo = r.im_lo > 0.0 ? r.im_lo * (1.0 - f) : r.im_lo - f * h;
  return out;
}

}  // namespace

double Rect::diameter() const { return std::hypot(width(), height()); }

bool Rect::contains(cplx z, double pad) const {
  return z.real() >= re_lo - pad && z.real() <= re_hi + pad && z.imag() >= im_lo - pad &&
         z.imag() <= im_hi + pad;
}

namespace {
EigenvalueRecord refine(const Problem& p, cplx seed, double tol);
}

const char* to_string(Source s) { return s == Source::shooting ? "shooting" : "oracle"; }

ContourCounter::ContourCounter(const Problem& p, LocateOptions opt)
    : p_(&p), opt_(opt), w_sup_(std::max(p.w().max_abs(), 1e-300)) {}

double ContourCounter::spacing(cplx lam) const {
  // The phase of D advances at most ~ sqrt(w_sup / |lambda|) per unit lambda.
  const double scale = refinement_ ? std::numbers::pi / 16.0 : std::numbers::pi / 8.0;
  return scale * std::sqrt(std::max(1.0, std::abs(lam)) / w_sup_);
}

const Shot& ContourCounter::sample(cplx lam) {
  const auto key = std::make_tuple(lam.real(), lam.imag());
  auto it = shots_.find(key);
  if (it == shots_.end()) it = shots_.emplace(key, shoot(*p_, lam, opt_.contour_tol)).first;
  const Shot& s = it->second;
  if (s.miss == 0.0 || !std::isfinite(std::abs(s.miss))) throw ClearanceFailure{};
  if (std::abs(s.miss) < 1e-9 * (1.0 + std::abs(lam)) * std::abs(s.miss_prime))
    throw ClearanceFailure{};
  return s;
}

double ContourCounter::segment_phase(cplx a, const Shot& sa, cplx b, const Shot& sb, int depth) {
  const double bound = refinement_ ? std::numbers::pi / 4.0 : std::numbers::pi / 2.0;
  const double inc = std::arg(sb.miss * std::conj(sa.miss));
  if (std::abs(inc) < bound) return inc;
  if (depth > 60 || std::abs(b - a) < 1e-13 * (1.0 + std::abs(a))) throw ClearanceFailure{};
  const cplx m = 0.5 * (a + b);
  const Shot sm = sample(m);
  return segment_phase(a, sa, m, sm, depth + 1) + segment_phase(m, sm, b, sb, depth + 1);
}

double ContourCounter::leaf_phase(cplx a, cplx b) {
  const auto key = std::make_tuple(a.real(), a.imag(), b.real(), b.imag(), refinement_);
  if (auto it = edges_.find(key); it != edges_.end()) return it->second;
  const auto rkey = std::make_tuple(b.real(), b.imag(), a.real(), a.imag(), refinement_);
  if (auto it = edges_.find(rkey); it != edges_.end()) return -it->second;

  // Point on the segment closest to the origin sets the finest spacing.
  const cplx d = b - a;
  const double t0 = std::clamp(-(std::conj(d) * a).real() / std::norm(d), 0.0, 1.0);
  const double step = spacing(a + t0 * d);
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(d) / step)));
  double total = 0.0;
  cplx prev = a;
  Shot sprev = sample(a);
  for (int k = 1; k <= n; ++k) {
    const cplx cur = k == n ? b : a + (static_cast<double>(k) / n) * d;
    const Shot scur = sample(cur);
    total += segment_phase(prev, sprev, cur, scur, 0);
    prev = cur;
    sprev = scur;
  }
  edges_.emplace(key, total);
  return total;
}

double ContourCounter::edge_phase(cplx a, cplx b) {
  const cplx m = 0.5 * (a + b);
  if (std::abs(b - a) > 16.0 * spacing(m)) return edge_phase(a, m) + edge_phase(m, b);
  return leaf_phase(a, b);
}

double ContourCounter::raw_winding(const Rect& r) {
  const cplx c0{r.re_lo, r.im_lo}, c1{r.re_hi, r.im_lo}, c2{r.re_hi, r.im_hi}, c3{r.re_lo, r.im_hi};
  // Each side is split at its midpoint so nested rectangles reuse cached halves.
  double total = 0.0;
  const std::array<cplx, 5> corners{c0, c1, c2, c3, c0};
  for (std::size_t i = 0; i < 4; ++i) {
    const cplx a = corners[i], b = corners[i + 1], m = 0.5 * (a + b);
    total += edge_phase(a, m) + edge_phase(m, b);
  }
  return total / kTwoPi;
}

int ContourCounter::rounded(const Rect& r, double& raw) {
  raw = raw_winding(r);
  double n = std::round(raw);
  if (std::abs(raw - n) <= kRoundingSlack) return static_cast<int>(n);
  refinement_ = 1;
  try {
    raw = raw_winding(r);
  } catch (...) {
    refinement_ = 0;
    throw;
  }
  refinement_ = 0;
  n = std::round(raw);
  if (std::abs(raw - n) <= kRoundingSlack) return static_cast<int>(n);
  std::ostringstream os;
  os << "winding number " << raw << " is not near an integer";
  throw NumericalError(os.str());
}

WindingResult ContourCounter::winding(const Rect& r) {
  if (!(r.re_lo < r.re_hi && r.im_lo < r.im_hi)) throw InputError("degenerate rectangle");
  for (double f : kPerturbations) {
    const Rect rr = perturbed(r, f);
    try {
      WindingResult out;
      out.rect = rr;
      out.count = rounded(rr, out.raw);
      return out;
    } catch (const ClearanceFailure&) {
    }
  }
  throw NumericalError("contour passes through a zero of D after all perturbations");
}

std::vector<IsolatedRect> ContourCounter::isolate(const Rect& region, int count) {
  struct Item {
    Rect r;
    int count;
    int depth;
  };
  std::vector<IsolatedRect> out;
  std::deque<Item> queue{{region, count, 0}};
  while (!queue.empty()) {
    const Item it = queue.front();
    queue.pop_front();
    if (it.count == 0) continue;
    const Rect& r = it.r;
    const double scale = std::max(1.0, std::abs(r.center()));

    if (it.count == 1) {
      try {
        EigenvalueRecord rec = refine(*p_, r.center(), opt_.newton_tol);
        if (r.contains(rec.lambda, 1e-9 * r.diameter())) {
          rec.identity = eigenpair_identities(*p_, rec.lambda);
          out.push_back({r, 1, false, rec});
          continue;
        }
      } catch (const NumericalError&) {
      }
    }
    if (r.diameter() < 1e-8 * scale || it.depth >= opt_.max_depth) {
      IsolatedRect iso{r, it.count, it.count > 1, {}};
      try {
        iso.record = newton_refine(*p_, r.center(), opt_.newton_tol);
      } catch (const NumericalError&) {
        iso.record.lambda = r.center();
        iso.record.newton_residual = std::numeric_limits<double>::quiet_NaN();
      }
      iso.record.winding = it.count;
      out.push_back(iso);
      continue;
    }

    bool split = false;
    for (double off : kSplitOffsets) {
      const double sr = r.re_lo + (0.5 + off) * r.width();
      const double si = r.im_lo + (0.5 + off) * r.height();
      const std::array<Rect, 4> kids{Rect{r.re_lo, sr, r.im_lo, si}, Rect{sr, r.re_hi, r.im_lo, si},
                                     Rect{r.re_lo, sr, si, r.im_hi}, Rect{sr, r.re_hi, si, r.im_hi}};
      std::array<int, 4> counts{};
      try {
        double raw = 0.0;
        for (std::size_t k = 0; k < 4; ++k) counts[k] = rounded(kids[k], raw);
      } catch (const ClearanceFailure&) {
        continue;
      }
      if (counts[0] + counts[1] + counts[2] + counts[3] != it.count) continue;
      for (std::size_t k = 0; k < 4; ++k) queue.push_back({kids[k], counts[k], it.depth + 1});
      split = true;
      break;
    }
    if (!split) throw NumericalError("subdivision does not conserve the winding count");
  }
  return out;
}

int winding_count(const Problem& p, const Rect& r, double tol) {
  LocateOptions opt;
  opt.contour_tol = tol;
  ContourCounter cc(p, opt);
  return cc.winding(r).count;
}

std::vector<IsolatedRect> isolate(const Problem& p, const Rect& region) {
  ContourCounter cc(p);
  const WindingResult w = cc.winding(region);
  return cc.isolate(w.rect, w.count);
}

namespace {

// Newton iterate only; identity residuals are left empty.
EigenvalueRecord refine(const Problem& p, cplx seed, double tol) {
  cplx lam = seed;
  double last_step = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const Shot s = shoot(p, lam, tol);
    const cplx step = s.miss / s.miss_prime;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    lam -= step;
    const double st = std::abs(step), lim = 1e-12 * (1.0 + std::abs(lam));
    // Integrator noise can stall the iteration slightly above the target.
    if (st <= lim || (st <= 1e3 * lim && st >= 0.5 * last_step)) {
      converged = true;
      break;
    }
    last_step = st;
  }
  if (!converged) {
    std::ostringstream os;
    os.precision(12);
    os << "Newton iteration from " << seed << " did not converge";
    throw NumericalError(os.str());
  }
  const Shot s = shoot(p, lam, tol);
  EigenvalueRecord rec;
  rec.lambda = lam;
  rec.newton_residual = std::abs(s.miss / s.miss_prime) / (1.0 + std::abs(lam));
  if (!(rec.newton_residual <= 1e-9)) {
    std::ostringstream os;
    os << "Newton residual " << rec.newton_residual << " exceeds 1e-9";
    throw NumericalError(os.str());
  }
  return rec;
}

}  // namespace

EigenvalueRecord newton_refine(const Problem& p, cplx seed, double tol) {
  EigenvalueRecord rec = refine(p, seed, tol);
  rec.identity = eigenpair_identities(p, rec.lambda);
  return rec;
}

IdentityResiduals eigenpair_identities(const Problem& p, cplx lambda) {
  const Trajectory t = trajectory(p, lambda);
  double norm = 0.0, wphi = 0.0, grad = 0.0, pot = 0.0;
  for (std::size_t i = 0; i + 2 < t.x.size(); i += 2) {
    const double h = t.x[i + 2] - t.x[i];
    const std::array<double, 3> wts{h / 6.0, 4.0 * h / 6.0, h / 6.0};
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t j = i + k;
      const double y2 = std::norm(t.y[j]), d2 = std::norm(t.dy[j]);
      norm += wts[k] * y2;
      wphi += wts[k] * p.w()(t.x[j]) * y2;
      grad += wts[k] * d2;
      pot += wts[k] * p.q()(t.x[j]) * y2;
    }
  }
  IdentityResiduals r;
  r.wphi2 = std::abs(wphi) / norm;
  r.dirichlet_form = std::abs(grad + pot) / norm;
  r.phi_prime_sq = grad / norm;
  const double qm = q_minus_l1(p.q());
  r.gradient_bound = 4.0 * qm * qm;
  if (p.flags().symmetric) {
    const double inv = 1.0 / std::sqrt(norm);
    double worst = 0.0;
    const std::size_t m = t.uniform.size() - 1;
    for (std::size_t k = 0; k <= m; ++k)
      worst = std::max(worst, std::abs(std::abs(t.y[t.uniform[k]]) - std::abs(t.y[t.uniform[m - k]])));
    r.reflection = worst * inv;
  } else {
    r.reflection = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

IdentityResiduals eigenpair_identities(const Problem& p, const EigenvalueRecord& rec) {
  return eigenpair_identities(p, rec.lambda);
}

NonrealResult find_nonreal(const Problem& p, const LocateOptions& opt) {
  NonrealResult res;
  res.region = search_region(p, opt.margin);
  const OscillationCount osc = oscillation_count(p.q(), p.w().absolute());
  res.negative_count = osc.zeros_interior;
  res.zero_is_eigenvalue = osc.lambda_is_eigenvalue;
  if (res.region.empty()) return res;

  res.delta_im = opt.delta_im.value_or(1e-6 * std::max(1.0, res.region.im_max));
  if (!(res.delta_im > 0.0 && res.delta_im < res.region.im_max))
    throw InputError("delta_im must lie in (0, im_max)");
  {
    std::ostringstream os;
    os << "eigenvalues with 0 < |Im lambda| < " << res.delta_im << " are outside the certified search";
    res.caveat = os.str();
  }
  const double pad = 1.0 + 1e-3;
  const Rect base{-res.region.re_max * pad, res.region.re_max * pad, res.delta_im,
                  res.region.im_max * pad};

  ContourCounter cc(p, opt);
  WindingResult w;
  bool done = false;
  // Only outward perturbations keep the whole region covered.
  for (double f : {0.0, 0.0031, 0.0067, 0.0097}) {
    Rect r = base;
    if (f > 0.0) {
      r.re_lo -= f * base.width();
      r.re_hi += f * base.width();
      r.im_hi += f * base.height();
      r.im_lo = base.im_lo * (1.0 - f);
    }
    try {
      w = cc.winding(r);
      if (w.rect.re_lo <= base.re_lo && w.rect.re_hi >= base.re_hi && w.rect.im_hi >= base.im_hi &&
          w.rect.im_lo <= base.im_lo) {
        done = true;
        break;
      }
    } catch (const NumericalError&) {
    }
  }
  if (!done) throw NumericalError("could not certify the winding count of the search region");
  res.searched = w.rect;
  res.upper_count = w.count;
  if (w.count < 0) throw NumericalError("negative winding count on the search region");

  for (const IsolatedRect& iso : cc.isolate(w.rect, w.count)) {
    EigenvalueRecord up = iso.record;
    up.winding = iso.winding;
    up.source = Source::shooting;
    EigenvalueRecord down = up;
    down.lambda = std::conj(up.lambda);
    res.records.push_back(up);
    res.records.push_back(down);
  }
  std::sort(res.records.begin(), res.records.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a.lambda.real(), a.lambda.imag()) <
           std::make_pair(b.lambda.real(), b.lambda.imag());
  });
  res.shots = cc.shots();

  int total = 0;
  for (const auto& r : res.records) total += r.winding;
  res.cap_satisfied = total <= 2 * res.negative_count;
  if (p.flags().symmetric) {
    for (const auto& r : res.records) {
      const cplx partner = -std::conj(r.lambda);
      const double tol = 1e-8 * std::max(1.0, std::abs(r.lambda));
      const bool found = std::any_of(res.records.begin(), res.records.end(), [&](const auto& o) {
        return std::abs(o.lambda - partner) <= tol;
      });
      if (!found) res.symmetric_closed = false;
    }
  }
  return res;
}

}  // namespace indefsl
