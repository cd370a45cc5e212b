#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "indefsl/bounds.hpp"
#include "indefsl/shooting.hpp"

namespace indefsl {

/// Axis-aligned rectangle in the lambda-plane.
struct Rect {
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;

  cplx center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
  double width() const { return re_hi - re_lo; }
  double height() const { return im_hi - im_lo; }
  double diameter() const;
  bool contains(cplx z, double pad = 0.0) const;
};

struct IdentityResiduals {
  double wphi2 = 0.0;           ///< |int w |phi|^2|
  double dirichlet_form = 0.0;  ///< |int |phi'|^2 + q |phi|^2|
  double phi_prime_sq = 0.0;    ///< ||phi'||_2^2
  double gradient_bound = 0.0;  ///< 4 ||q_-||_1^2
  /// max | |phi(x)| - |phi(-x)| | on the uniform grid; NaN for non-symmetric problems.
  double reflection = 0.0;
};

enum class Source { shooting, oracle };
const char* to_string(Source s);

struct EigenvalueRecord {
  cplx lambda;
  int winding = 1;
  /// |D / D'| / (1 + |lambda|) at the refined value.
  double newton_residual = 0.0;
  IdentityResiduals identity;
  Source source = Source::shooting;
};

/// Contour samples only need a reliable phase; the per-unit-length error control keeps
/// D within a few multiples of this relative to its size.
inline constexpr double kDefaultContourTol = 1e-6;

struct LocateOptions {
  double newton_tol = 1e-12;  ///< integrator tolerance for Newton iterates
  double contour_tol = kDefaultContourTol;  ///< integrator tolerance for contour samples
  double margin = kDefaultMargin;
  /// Lower edge of the upper-half search strip; default 1e-6 max(1, im_max).
  std::optional<double> delta_im;
  int max_depth = 60;
};

struct WindingResult {
  int count = 0;
  double raw = 0.0;  ///< unrounded winding number
  Rect rect;         ///< rectangle actually used (after any clearance perturbation)
};

struct IsolatedRect {
  Rect rect;
  int winding = 0;
  bool cluster = false;  ///< winding > 1 at the resolution limit
  EigenvalueRecord record;
};

/// Argument-principle machinery for D on one problem. Holds a per-instance cache of
/// shots and edge phases so that nested rectangles share work; not thread-safe.
class ContourCounter {
 public:
  explicit ContourCounter(const Problem& p, LocateOptions opt = {});

  /// Winding number of D along the boundary of r, perturbing r (deterministically,
  /// up to 1% of its size) when the contour passes too close to a zero.
  WindingResult winding(const Rect& r);

  /// Quadtree subdivision of a region with known count into rectangles holding one
  /// Newton-refined zero each (or a cluster at the resolution limit).
  std::vector<IsolatedRect> isolate(const Rect& region, int count);

  std::size_t shots() const { return shots_.size(); }

 private:
  struct ClearanceFailure {};

  const Shot& sample(cplx lam);
  double edge_phase(cplx a, cplx b);
  double leaf_phase(cplx a, cplx b);
  double segment_phase(cplx a, const Shot& sa, cplx b, const Shot& sb, int depth);
  double spacing(cplx lam) const;
  double raw_winding(const Rect& r);
  int rounded(const Rect& r, double& raw);

  const Problem* p_;
  LocateOptions opt_;
  double w_sup_;
  double phase_bound_;
  double spacing_scale_;
  int refinement_ = 0;
  std::map<std::tuple<double, double>, Shot> shots_;
  std::map<std::tuple<double, double, double, double, int>, double> edges_;
};

/// Winding number of D on the boundary of r.
int winding_count(const Problem& p, const Rect& r, double tol = kDefaultContourTol);

std::vector<IsolatedRect> isolate(const Problem& p, const Rect& region);

/// Newton iteration on D with D' from the variational system; throws NumericalError on
/// non-convergence or when the final residual exceeds 1e-9.
EigenvalueRecord newton_refine(const Problem& p, cplx seed, double tol = 1e-12);

/// Residuals of the eigenpair identities for the normalized (||phi||_2 = 1) eigenfunction.
IdentityResiduals eigenpair_identities(const Problem& p, cplx lambda);
IdentityResiduals eigenpair_identities(const Problem& p, const EigenvalueRecord& rec);

struct NonrealResult {
  std::vector<EigenvalueRecord> records;  ///< closed under conjugation, sorted by (Re, Im)
  BoundBox region;
  Rect searched;
  int upper_count = 0;
  int negative_count = 0;  ///< n from the oscillation count of the |w| problem
  bool zero_is_eigenvalue = false;
  bool cap_satisfied = true;   ///< total multiplicity <= 2n
  bool symmetric_closed = true;  ///< closed under lambda -> -conj(lambda) (symmetric problems)
  double delta_im = 0.0;
  std::string caveat;
  std::size_t shots = 0;
};

/// Certified enumeration of the non-real eigenvalues inside the a priori search region.
/// Throws HypothesisError when no a priori box applies.
NonrealResult find_nonreal(const Problem& p, const LocateOptions& opt = {});

}  // namespace indefsl
