#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sslm/regression/design.hpp"

namespace sslm {

struct FitOptions {
  double tol = 1e-8;     // relative criterion change at convergence
  int max_iter = 200;
  bool compute_ml = true;  // also maximize the ML criterion (for nesting)
  // Extra ML starting points: per-term relative standard deviations, used
  // to warm-start a larger model from a nested one.
  std::vector<std::map<std::string, double>> ml_warm_starts;
};

// Fitted mixed model with diagonal random-effect covariance. Random terms
// are named "<column>|<grouping>", e.g. "(intercept)|item", "s_lex_0|item",
// "(intercept)|participant".
struct LmmFit {
  LmmVariant variant = LmmVariant::NEITHER;
  std::vector<std::string> coef_names;
  Vec beta;
  Vec se;
  double sigma2 = 0.0;  // residual variance
  std::vector<std::string> term_names;
  Vec term_variance;  // absolute variances, aligned with term_names
  std::map<std::string, double> theta_reml;  // relative SDs at the optimum
  std::map<std::string, double> theta_ml;
  // Conditional modes: term name -> group level -> mode.
  std::map<std::string, std::map<std::string, double>> modes;
  double reml_criterion = 0.0;  // -2 * restricted log-likelihood, profiled
  double loglik_ml = 0.0;       // maximized ML log-likelihood
  bool converged = false;
  int iterations = 0;
  std::vector<double> criterion_trace;  // accepted REML iterates
  ScalingConstants scaling;

  double coef(const std::string& name) const;
  double coef_se(const std::string& name) const;

  nlohmann::json to_json() const;
  static LmmFit from_json(const nlohmann::json& j);
};

// REML fit with profiled fixed effects; quasi-Newton on the log-variance
// scale. Throws DataError on singular designs (naming the offending
// columns) and NumericError when the optimizer fails to converge.
LmmFit fit_lmm(const DesignMatrix& dm, const FitOptions& opts = {});

// Penalized least-squares solution at fixed relative SDs (one entry per
// random term, in the fitter's term order). Exposed for the variance-zero
// limit checks: at theta == 0 the fixed effects are exactly OLS.
struct PlsSolution {
  Vec beta;
  double pwrss = 0.0;        // penalized residual sum of squares
  double reml_criterion = 0.0;
  double ml_criterion = 0.0;
};
PlsSolution solve_pls(const DesignMatrix& dm, const Vec& theta);

struct RtPrediction {
  double rt_ms = 0.0;
  bool participant_seen = true;
};

// Fixed effects plus the participant's conditional mode; item offsets are
// zero (critical items are unseen during fitting). Unseen participants get
// the population-level prediction and a flag.
std::vector<RtPrediction> predict_rt(const LmmFit& fit, const DesignMatrix& rows);

}  // namespace sslm
