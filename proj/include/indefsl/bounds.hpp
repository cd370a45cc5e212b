#pragma once

#include <complex>
#include <optional>
#include <string>

#include "indefsl/coeffs.hpp"

namespace indefsl {

inline constexpr double kDefaultMargin = 1e-6;

enum class BoundKind {
  xw_measure,           ///< needs x w(x) > 0 a.e.; uses m1
  w2_measure,           ///< needs w absolutely continuous with w' in L2; uses m2
  symmetric_imaginary,  ///< q even, w odd, q >= q0 < 0, |w| >= w0 > 0; imaginary axis only
  search_region,        ///< componentwise minimum of the applicable 2-D boxes
};

const char* to_string(BoundKind k);

/// The rectangle {|Re lambda| <= re_max, 0 < |Im lambda| <= im_max}.
struct BoundBox {
  BoundKind kind = BoundKind::xw_measure;
  bool applicable = false;
  double re_max = 0.0;
  double im_max = 0.0;
  std::optional<double> eps_used;
  std::string reason;
  /// Set for symmetric_imaginary: the bound covers purely imaginary eigenvalues only.
  bool imaginary_axis_only = false;

  /// Applicable and degenerate: no non-real eigenvalue can exist.
  bool empty() const { return applicable && re_max == 0.0 && im_max == 0.0; }

  /// Whether lam satisfies the box with relative slack; always true when not applicable.
  bool admits(std::complex<double> lam, double rel_slack = 1e-6) const;
};

enum class MeasureKind { xw_sublevel, w2_sublevel };

/// Largest eps (bisection, relative resolution 1e-12) with 8 ||q_-||_1^2 m(eps) <= 1 - margin.
/// Returns +inf when the constraint holds for every eps (m saturates at 2 below the threshold).
/// Throws HypothesisError for xw_sublevel without a single turning point, and
/// std::invalid_argument when ||q_-||_1 == 0 (every eps admissible; callers short-circuit).
double epsilon_star(MeasureKind kind, const Problem& p, double margin = kDefaultMargin);

BoundBox box_xw_measure(const Problem& p, double margin = kDefaultMargin);
BoundBox box_w2_measure(const Problem& p, double margin = kDefaultMargin);
BoundBox imaginary_bound(const Problem& p);

/// Componentwise minimum of the applicable xw/w2 boxes; an empty box when ||q_-||_1 == 0.
/// Throws HypothesisError when neither box applies.
BoundBox search_region(const Problem& p, double margin = kDefaultMargin);

struct BoundsReport {
  BoundBox xw;
  BoundBox w2;
  BoundBox imaginary;
  BoundBox region;  ///< applicable == false (with reason) instead of throwing
};

BoundsReport all_bounds(const Problem& p, double margin = kDefaultMargin);

}  // namespace indefsl
