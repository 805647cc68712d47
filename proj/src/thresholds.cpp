#include "chemolab/thresholds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace chemolab {

ThresholdQuery ThresholdQuery::defaults(double mu, double chi1, double chi2) {
  ThresholdQuery q;
  q.mu = mu;
  q.chi1 = chi1;
  q.chi2 = chi2;
  q.B_max = q.beta_max = 10.0 * (chi1 + chi2 + mu + 1.0);
  return q;
}

void ThresholdQuery::validate() const {
  if (!(mu > 0.0 && chi1 > 0.0 && chi2 > 0.0)) {
    throw std::invalid_argument("ThresholdQuery: mu, chi1, chi2 must be > 0");
  }
  if (!(0.0 < B_min && B_min < B_max) || !(0.0 < beta_min && beta_min < beta_max)) {
    throw std::invalid_argument("ThresholdQuery: invalid search box");
  }
  if (resolution < 16) {
    throw std::invalid_argument("ThresholdQuery: resolution must be >= 16");
  }
}

double eval_f(double mu, double chi1, double chi2, double beta, double B) {
  if (!(mu > 0.0 && chi1 > 0.0 && chi2 > 0.0 && beta > 0.0 && B > 0.0)) {
    throw std::invalid_argument("eval_f: all arguments must be > 0");
  }
  const double r = std::abs(chi2 - B) - beta;
  const double d = chi1 - chi2;
  return mu * (B + beta) * (1.0 + (B * r * r + d * d * beta) / (4.0 * B * beta));
}

QExponent q_exponent(double chi1, double chi2, double beta, double B) {
  if (!(chi1 > 0.0 && chi2 > 0.0 && beta > 0.0 && B > 0.0)) {
    throw std::invalid_argument("q_exponent: all arguments must be > 0");
  }
  const double r = std::abs(chi2 - B) - beta;
  const double d = chi1 - chi2;
  const double den = B * r * r + d * d * beta;
  if (den == 0.0) return QExponent{0.0, true};
  return QExponent{4.0 * B * beta / den, false};
}

double chi_star_equal(double mu, double chi) {
  if (!(mu > 0.0 && chi > 0.0)) {
    throw std::invalid_argument("chi_star_equal: arguments must be > 0");
  }
  return chi < 2.0 ? mu * chi * chi / 4.0 : mu * (chi - 1.0);
}

double chi_star_upper_bound(double mu, double chi1, double chi2) {
  if (!(mu > 0.0 && chi1 > 0.0 && chi2 > 0.0)) {
    throw std::invalid_argument("chi_star_upper_bound: arguments must be > 0");
  }
  // Slice infima of f: fixing B = chi2 (resp. B = chi1 on the swapped
  // branch) and letting beta -> 0 gives mu*chi2 + mu*(chi1-chi2)^2/4 and
  // mu*chi1 + mu*(chi2-chi1)^2/4.  (A frequently quoted variant divides the
  // mismatch term by 4*chi instead of 4; that value is not an upper bound
  // for the infimum of this f -- the (B+beta) prefactor cancels the 1/B.)
  const double d2 = (chi1 - chi2) * (chi1 - chi2);
  return mu * std::min(chi1, chi2) + mu * d2 / 4.0;
}

namespace {

struct Probe {
  double f;
  double B, beta;
};

// Deterministic tie-break: smaller f, then smaller B, then smaller beta.
void consider(Probe& best, double f, double B, double beta) {
  if (f < best.f || (f == best.f && (B < best.B || (B == best.B && beta < best.beta)))) {
    best = Probe{f, B, beta};
  }
}

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  }
  return out;
}

// Nelder-Mead on (log B, log beta), fixed iterations, no early exit.
Probe simplex_refine(const ThresholdQuery& q, Probe start) {
  using Pt = std::array<double, 2>;
  const double lo_cap = std::log(1e-300);
  const double hi_cap = std::log(q.B_max) + 5.0;
  auto clamp = [&](Pt p) {
    p[0] = std::clamp(p[0], lo_cap, hi_cap);
    p[1] = std::clamp(p[1], lo_cap, hi_cap);
    return p;
  };
  auto eval = [&](const Pt& p) {
    return eval_f(q.mu, q.chi1, q.chi2, std::exp(p[1]), std::exp(p[0]));
  };
  Pt v0{std::log(start.B), std::log(start.beta)};
  std::array<Pt, 3> v{v0, clamp({v0[0] + 0.5, v0[1]}), clamp({v0[0], v0[1] + 0.5})};
  std::array<double, 3> fv{eval(v[0]), eval(v[1]), eval(v[2])};
  Probe best = start;
  auto track = [&](const Pt& p, double f) {
    consider(best, f, std::exp(p[0]), std::exp(p[1]));
  };
  track(v[0], fv[0]);
  for (int it = 0; it < q.refine_iters; ++it) {
    std::array<int, 3> ord{0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const Pt &b = v[ord[0]], &s = v[ord[1]], &w = v[ord[2]];
    const Pt centroid{(b[0] + s[0]) / 2.0, (b[1] + s[1]) / 2.0};
    auto along = [&](double t) {
      return clamp({centroid[0] + t * (centroid[0] - w[0]),
                    centroid[1] + t * (centroid[1] - w[1])});
    };
    Pt refl = along(1.0);
    double f_refl = eval(refl);
    track(refl, f_refl);
    if (f_refl < fv[ord[0]]) {
      Pt exp_pt = along(2.0);
      double f_exp = eval(exp_pt);
      track(exp_pt, f_exp);
      v[ord[2]] = f_exp < f_refl ? exp_pt : refl;
      fv[ord[2]] = std::min(f_exp, f_refl);
    } else if (f_refl < fv[ord[1]]) {
      v[ord[2]] = refl;
      fv[ord[2]] = f_refl;
    } else {
      Pt con = along(f_refl < fv[ord[2]] ? 0.5 : -0.5);
      double f_con = eval(con);
      track(con, f_con);
      if (f_con < std::min(f_refl, fv[ord[2]])) {
        v[ord[2]] = con;
        fv[ord[2]] = f_con;
      } else {
        // shrink toward the best vertex
        for (int k : {ord[1], ord[2]}) {
          v[k] = clamp({(v[k][0] + b[0]) / 2.0, (v[k][1] + b[1]) / 2.0});
          fv[k] = eval(v[k]);
          track(v[k], fv[k]);
        }
      }
    }
  }
  return best;
}

}  // namespace

BranchOptimum chi1_star(const ThresholdQuery& q) {
  q.validate();
  Probe best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  const auto Bs = log_space(q.B_min, q.B_max, q.resolution);
  const auto betas = log_space(q.beta_min, q.beta_max, q.resolution);
  for (double B : Bs) {
    for (double beta : betas) {
      consider(best, eval_f(q.mu, q.chi1, q.chi2, beta, B), B, beta);
    }
  }
  // The infimum can be approached only on the boundary of the quadrant:
  // B -> 0 at fixed beta (equal sensitivities) or (B, beta) -> (chi2, 0).
  // Seed those corners explicitly so the reported minimum reaches them.
  Probe corner = best;
  for (double beta = 1e-14; beta <= q.beta_max; beta *= 10.0) {
    if (q.chi2 <= q.B_max) {
      consider(corner, eval_f(q.mu, q.chi1, q.chi2, beta, q.chi2), q.chi2, beta);
    }
    consider(corner, eval_f(q.mu, q.chi1, q.chi2, beta, q.B_min), q.B_min, beta);
  }
  Probe refined = simplex_refine(q, best);
  consider(refined, corner.f, corner.B, corner.beta);
  if (corner.f < best.f) {
    Probe r2 = simplex_refine(q, corner);
    consider(refined, r2.f, r2.B, r2.beta);
  }
  return BranchOptimum{refined.f, refined.beta, refined.B};
}

ThresholdResult chi_star(const ThresholdQuery& query) {
  query.validate();
  ThresholdQuery swapped = query;
  std::swap(swapped.chi1, swapped.chi2);
  const BranchOptimum b1 = chi1_star(query);
  const BranchOptimum b2 = chi1_star(swapped);
  ThresholdResult res;
  if (b1.value <= b2.value) {
    res.branch = 1;
    res.chi_star = b1.value;
    res.beta = b1.beta;
    res.B = b1.B;
    const QExponent qe = q_exponent(query.chi1, query.chi2, res.beta, res.B);
    res.q = qe.q;
    res.q_degenerate = qe.degenerate;
  } else {
    res.branch = 2;
    res.chi_star = b2.value;
    res.beta = b2.beta;
    res.B = b2.B;
    const QExponent qe = q_exponent(query.chi2, query.chi1, res.beta, res.B);
    res.q = qe.q;
    res.q_degenerate = qe.degenerate;
  }
  res.f_at_argmin = res.chi_star;
  return res;
}

double persistence_margin(const ModelParams& params, const ThresholdQuery& query) {
  params.validate();
  return params.a_min() - chi_star(query).chi_star;
}

double persistence_margin(const ModelParams& params) {
  return persistence_margin(
      params, ThresholdQuery::defaults(params.mu, params.chi1, params.chi2));
}

std::optional<MomentWitness> negative_moment_witness(const ModelParams& params,
                                                     const ThresholdQuery& query) {
  params.validate();
  query.validate();
  const ThresholdResult star = chi_star(query);
  const double eps0 = params.a_min() - star.chi_star;
  if (!(eps0 > 0.0)) return std::nullopt;
  const double f_cap = params.a_min() - 0.75 * eps0;

  std::optional<MomentWitness> best;
  auto try_point = [&](int branch, double c1, double c2, double beta, double B) {
    const double f = eval_f(query.mu, c1, c2, beta, B);
    if (f > f_cap) return;
    const QExponent qe = q_exponent(c1, c2, beta, B);
    if (qe.degenerate || !(qe.q < 1.0) || !(qe.q > 0.0)) return;
    if (!best || qe.q > best->q || (qe.q == best->q && f < best->f)) {
      best = MomentWitness{beta, B, qe.q, f, branch};
    }
  };
  const int n = std::max(query.resolution, 96);
  const auto Bs = log_space(query.B_min, query.B_max, n);
  const auto betas = log_space(query.beta_min, query.beta_max, n);
  for (double B : Bs) {
    for (double beta : betas) {
      try_point(1, query.chi1, query.chi2, beta, B);
      try_point(2, query.chi2, query.chi1, beta, B);
    }
  }
  return best;
}

}  // namespace chemolab
