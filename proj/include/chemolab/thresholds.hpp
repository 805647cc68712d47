#pragma once

#include <optional>

#include "chemolab/elliptic.hpp"

namespace chemolab {

/// Search parameters for the (beta, B) infimum.
struct ThresholdQuery {
  double mu = 1.0, chi1 = 1.0, chi2 = 1.0;
  double B_min = 1e-9, B_max = 0.0;      // B_max filled by defaults()
  double beta_min = 1e-7, beta_max = 0.0;
  int resolution = 64;       // log-spaced points per axis
  int refine_iters = 200;    // Nelder-Mead iterations from the best cell

  static ThresholdQuery defaults(double mu, double chi1, double chi2);
  void validate() const;
};

struct ThresholdResult {
  double chi_star = 0.0;
  int branch = 1;            // 1 or 2: which swapped-argument run attained the min
  double beta = 0.0, B = 0.0;
  double q = 0.0;            // moment exponent at the argmin
  bool q_degenerate = false;
  double f_at_argmin = 0.0;
};

/// Auxiliary objective in the proof-consistent form
///   f = mu (B + beta) (1 + [B (|chi2 - B| - beta)^2 + (chi1 - chi2)^2 beta] / (4 B beta)),
/// which satisfies f = mu (B + beta)(1 + 1/q) with q = q_exponent(...).
double eval_f(double mu, double chi1, double chi2, double beta, double B);

struct QExponent {
  double q = 0.0;
  bool degenerate = false;  // zero denominator: beta = |chi2 - B| and chi1 = chi2
};

/// q = 4 B beta / (B (|chi2 - B| - beta)^2 + (chi1 - chi2)^2 beta)
QExponent q_exponent(double chi1, double chi2, double beta, double B);

/// Closed form for equal sensitivities: mu chi^2 / 4 for chi < 2,
/// mu (chi - 1) for chi >= 2. Continuous at chi = 2.
double chi_star_equal(double mu, double chi);

/// Closed-form upper bound from the two slice infima of f at B = chi2 and
/// (swapped) B = chi1: mu * min(chi1, chi2) + mu (chi1-chi2)^2 / 4.
double chi_star_upper_bound(double mu, double chi1, double chi2);

struct BranchOptimum {
  double value = 0.0;
  double beta = 0.0, B = 0.0;
};

/// Approximate infimum of eval_f(mu, chi1, chi2, ., .) over the positive
/// quadrant: log grid scan, corner candidates at B = chi2, then simplex
/// refinement in log coordinates. Result is the minimum f evaluated.
BranchOptimum chi1_star(const ThresholdQuery& query);

/// min of the two swapped-argument branch infima; records branch, argmin
/// and the moment exponent there.
ThresholdResult chi_star(const ThresholdQuery& query);

double persistence_margin(const ModelParams& params, const ThresholdQuery& query);
double persistence_margin(const ModelParams& params);

/// A (beta, B) with q < 1 and f <= a_min - 3 eps0 / 4, if one exists in the
/// search box. Used by the explicit negative-moment decay envelope.
struct MomentWitness {
  double beta = 0.0, B = 0.0;
  double q = 0.0, f = 0.0;
  int branch = 1;
};

std::optional<MomentWitness> negative_moment_witness(const ModelParams& params,
                                                     const ThresholdQuery& query);

}  // namespace chemolab
