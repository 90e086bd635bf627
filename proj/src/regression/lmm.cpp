#include "sslm/regression/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "sslm/nn/kernels.hpp"
#include "sslm/util/errors.hpp"

namespace sslm {

namespace {

constexpr double kLogPi2 = 1.8378770664093453;  // log(2*pi)
constexpr double kThetaFloor = 1e-6;            // relative SD lower bound

// Random-effect column layout: for each item level an intercept column and
// one slope column per item_slope_col, then one intercept column per
// participant level. Columns that belong to the same term share a theta.
struct RandomLayout {
  std::vector<std::string> item_levels;
  std::vector<std::string> participant_levels;
  std::vector<std::string> term_names;   // theta order
  std::vector<int> term_of_column;       // q entries
  std::vector<int> level_of_column;      // level index within its grouping
  std::vector<int> slope_col_in_x;       // x column feeding this z column (-1 = intercept)
  int q = 0;
  int n_item_terms = 0;
};

RandomLayout make_layout(const DesignMatrix& dm) {
  RandomLayout lay;
  std::set<std::string> items(dm.item_of_row.begin(), dm.item_of_row.end());
  std::set<std::string> participants(dm.participant_of_row.begin(),
                                     dm.participant_of_row.end());
  lay.item_levels.assign(items.begin(), items.end());
  lay.participant_levels.assign(participants.begin(), participants.end());
  if (lay.item_levels.size() < 2)
    throw DataError("fit_lmm: need at least 2 item levels");
  if (lay.participant_levels.size() < 2)
    throw DataError("fit_lmm: need at least 2 participant levels");

  lay.term_names.push_back("(intercept)|item");
  std::vector<int> slope_x_cols;
  for (const auto& col : dm.item_slope_cols) {
    auto it = std::find(dm.col_names.begin(), dm.col_names.end(), col);
    if (it == dm.col_names.end())
      throw DataError("fit_lmm: random-slope column '" + col + "' not in design");
    slope_x_cols.push_back(static_cast<int>(it - dm.col_names.begin()));
    lay.term_names.push_back(col + "|item");
  }
  lay.n_item_terms = 1 + static_cast<int>(slope_x_cols.size());
  lay.term_names.push_back("(intercept)|participant");

  for (int lvl = 0; lvl < static_cast<int>(lay.item_levels.size()); ++lvl) {
    lay.term_of_column.push_back(0);
    lay.level_of_column.push_back(lvl);
    lay.slope_col_in_x.push_back(-1);
    for (std::size_t s = 0; s < slope_x_cols.size(); ++s) {
      lay.term_of_column.push_back(1 + static_cast<int>(s));
      lay.level_of_column.push_back(lvl);
      lay.slope_col_in_x.push_back(slope_x_cols[s]);
    }
  }
  for (int lvl = 0; lvl < static_cast<int>(lay.participant_levels.size()); ++lvl) {
    lay.term_of_column.push_back(lay.n_item_terms);
    lay.level_of_column.push_back(lvl);
    lay.slope_col_in_x.push_back(-1);
  }
  lay.q = static_cast<int>(lay.term_of_column.size());
  return lay;
}

// Cached cross-products; Z is never materialized, rows touch only the
// columns of their own item and participant levels.
struct PlsCache {
  const DesignMatrix* dm = nullptr;
  RandomLayout lay;
  Mat ztz, ztx, xtx;
  Vec zty, xty;
  double yty = 0.0;
  long n = 0;
  int p = 0;

  std::map<std::string, int> item_level_index, participant_level_index;

  void build(const DesignMatrix& design) {
    dm = &design;
    lay = make_layout(design);
    n = design.x.rows;
    p = design.x.cols;
    if (n <= p)
      throw DataError("fit_lmm: fewer rows than fixed-effect columns");
    for (std::size_t i = 0; i < lay.item_levels.size(); ++i)
      item_level_index[lay.item_levels[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < lay.participant_levels.size(); ++i)
      participant_level_index[lay.participant_levels[i]] = static_cast<int>(i);

    const int q = lay.q;
    const int per_item = lay.n_item_terms;
    const int part_base = static_cast<int>(lay.item_levels.size()) * per_item;

    ztz = Mat(q, q);
    ztx = Mat(q, p);
    xtx = Mat(p, p);
    zty.assign(q, 0.0);
    xty.assign(p, 0.0);
    yty = 0.0;

    std::vector<int> zcols;
    std::vector<double> zvals;
    for (long r = 0; r < n; ++r) {
      const double* xr = design.x[r];
      double yr = design.y[r];
      int item_lvl = item_level_index.at(design.item_of_row[r]);
      int part_lvl = participant_level_index.at(design.participant_of_row[r]);

      zcols.clear();
      zvals.clear();
      int base = item_lvl * per_item;
      zcols.push_back(base);
      zvals.push_back(1.0);
      for (int s = 1; s < per_item; ++s) {
        zcols.push_back(base + s);
        zvals.push_back(xr[lay.slope_col_in_x[base + s]]);
      }
      zcols.push_back(part_base + part_lvl);
      zvals.push_back(1.0);

      for (std::size_t a = 0; a < zcols.size(); ++a) {
        for (std::size_t b = 0; b < zcols.size(); ++b)
          ztz[zcols[a]][zcols[b]] += zvals[a] * zvals[b];
        double* zxrow = ztx[zcols[a]];
        for (int j = 0; j < p; ++j) zxrow[j] += zvals[a] * xr[j];
        zty[zcols[a]] += zvals[a] * yr;
      }
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) xtx[i][j] += xr[i] * xr[j];
        xty[i] += xr[i] * yr;
      }
      yty += yr * yr;
    }

    // Exact duplicates surface as a clean error instead of a Cholesky
    // breakdown deep inside the optimizer.
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) {
        double sii = xtx[i][i], sjj = xtx[j][j];
        if (sii <= 0 || sjj <= 0) continue;
        double c = xtx[i][j] / std::sqrt(sii * sjj);
        if (std::abs(c) > 1.0 - 1e-9)
          throw DataError("fit_lmm: singular design, columns '" + design.col_names[i] +
                          "' and '" + design.col_names[j] + "' are collinear");
      }
  }

  Vec lambda_per_column(const Vec& theta) const {
    Vec lam(lay.q);
    for (int i = 0; i < lay.q; ++i) lam[i] = theta[lay.term_of_column[i]];
    return lam;
  }

  // Penalized least squares at fixed theta (relative SDs).
  struct Eval {
    double pwrss = 0.0;
    double logdet_l = 0.0;   // log |L|^2
    double logdet_rx = 0.0;  // log |RX|^2
    Vec beta;
    Vec u;  // spherical modes; b = lambda * u
    Mat rx_factor;  // lower Cholesky of the profiled fixed-effect block
  };

  Eval evaluate(const Vec& theta) const {
    const int q = lay.q;
    Vec lam = lambda_per_column(theta);

    Mat a(q, q);
    for (int i = 0; i < q; ++i) {
      const double* zi = ztz[i];
      double* ai = a[i];
      for (int j = 0; j < q; ++j) ai[j] = lam[i] * lam[j] * zi[j];
      ai[i] += 1.0;
    }
    if (!kern::cholesky(a, 0.0))
      throw NumericError("fit_lmm: random-effect system lost positive definiteness");

    Eval ev;
    ev.logdet_l = 0.0;
    for (int i = 0; i < q; ++i) ev.logdet_l += 2.0 * std::log(a[i][i]);

    // RZX = L^-1 (Lambda Z'X), column by column.
    Mat rzx(q, p);
    Vec col(q), sol(q);
    for (int j = 0; j < p; ++j) {
      for (int i = 0; i < q; ++i) col[i] = lam[i] * ztx[i][j];
      kern::solve_lower(a, col.data(), sol.data());
      for (int i = 0; i < q; ++i) rzx[i][j] = sol[i];
    }
    // cu = L^-1 (Lambda Z'y)
    Vec cu(q);
    for (int i = 0; i < q; ++i) col[i] = lam[i] * zty[i];
    kern::solve_lower(a, col.data(), cu.data());

    // S = X'X - RZX'RZX
    Mat s(p, p);
    double max_diag = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        double acc = xtx[i][j];
        for (int k = 0; k < q; ++k) acc -= rzx[k][i] * rzx[k][j];
        s[i][j] = acc;
        if (i == j && acc > max_diag) max_diag = acc;
      }
    if (!kern::cholesky(s, 1e-12 * std::max(1.0, max_diag)))
      throw DataError("fit_lmm: singular fixed-effect design (" +
                      describe_collinearity() + ")");
    ev.logdet_rx = 0.0;
    for (int i = 0; i < p; ++i) ev.logdet_rx += 2.0 * std::log(s[i][i]);

    // beta-hat via the profiled normal equations.
    Vec rhs(p);
    for (int j = 0; j < p; ++j) {
      double acc = xty[j];
      for (int k = 0; k < q; ++k) acc -= rzx[k][j] * cu[k];
      rhs[j] = acc;
    }
    Vec cbeta(p), beta(p);
    kern::solve_lower(s, rhs.data(), cbeta.data());
    kern::solve_lower_transposed(s, cbeta.data(), beta.data());

    double cu2 = kern::dot(cu.data(), cu.data(), q);
    double cb2 = kern::dot(cbeta.data(), cbeta.data(), p);
    ev.pwrss = yty - cu2 - cb2;
    if (ev.pwrss < 0.0) ev.pwrss = 0.0;

    // u-hat: L' u = cu - RZX beta
    Vec rhs_u(q);
    for (int i = 0; i < q; ++i) {
      double acc = cu[i];
      for (int j = 0; j < p; ++j) acc -= rzx[i][j] * beta[j];
      rhs_u[i] = acc;
    }
    Vec u(q);
    kern::solve_lower_transposed(a, rhs_u.data(), u.data());

    ev.beta = std::move(beta);
    ev.u = std::move(u);
    ev.rx_factor = std::move(s);
    return ev;
  }

  double reml_criterion(const Eval& ev) const {
    double df = static_cast<double>(n - p);
    double r2 = std::max(ev.pwrss, 1e-300);
    return ev.logdet_l + ev.logdet_rx + df * (1.0 + kLogPi2 + std::log(r2 / df));
  }

  double ml_criterion(const Eval& ev) const {
    double nn = static_cast<double>(n);
    double r2 = std::max(ev.pwrss, 1e-300);
    return ev.logdet_l + nn * (1.0 + kLogPi2 + std::log(r2 / nn));
  }

  std::string describe_collinearity() const {
    // Pairwise near-duplicates, reported by name.
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) {
        double sii = xtx[i][i], sjj = xtx[j][j], sij = xtx[i][j];
        if (sii <= 0 || sjj <= 0) continue;
        double c = sij / std::sqrt(sii * sjj);
        if (std::abs(c) > 1.0 - 1e-6)
          return "columns '" + dm->col_names[i] + "' and '" + dm->col_names[j] +
                 "' are collinear";
      }
    return "collinear column set could not be isolated to a pair";
  }
};

// Quasi-Newton (BFGS) with central-difference gradients, Armijo
// backtracking and a box lower bound.
struct BfgsOutcome {
  Vec x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

BfgsOutcome minimize_bfgs(const std::function<double(const Vec&)>& f, Vec x0,
                          double lower, double tol, int max_iter) {
  const int d = static_cast<int>(x0.size());
  auto clamp = [&](Vec& x) {
    for (double& v : x) v = std::max(v, lower);
  };
  clamp(x0);

  auto gradient = [&](const Vec& x, double /*fx*/) {
    Vec g(d);
    const double h = 1e-5;
    Vec xp = x;
    for (int i = 0; i < d; ++i) {
      double xi = x[i];
      xp[i] = xi + h;
      double fp = f(xp);
      xp[i] = std::max(xi - h, lower);
      double fm = f(xp);
      double denom = (xi + h) - xp[i];
      g[i] = (fp - fm) / denom;
      xp[i] = xi;
    }
    return g;
  };

  BfgsOutcome out;
  out.x = x0;
  out.f = f(x0);
  out.trace.push_back(out.f);

  Mat h_inv(d, d);
  for (int i = 0; i < d; ++i) h_inv[i][i] = 1.0;
  Vec g = gradient(out.x, out.f);

  for (int iter = 1; iter <= max_iter; ++iter) {
    out.iterations = iter;
    // Direction: -H g
    Vec dir(d, 0.0);
    for (int i = 0; i < d; ++i) {
      double acc = 0;
      for (int j = 0; j < d; ++j) acc -= h_inv[i][j] * g[j];
      dir[i] = acc;
    }
    double slope = kern::dot(dir.data(), g.data(), d);
    if (slope > 0) {  // reset to steepest descent
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) h_inv[i][j] = (i == j) ? 1.0 : 0.0;
      for (int i = 0; i < d; ++i) dir[i] = -g[i];
      slope = kern::dot(dir.data(), g.data(), d);
    }

    double step = 1.0;
    Vec x_new;
    double f_new = out.f;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = out.x;
      for (int i = 0; i < d; ++i) x_new[i] += step * dir[i];
      clamp(x_new);
      f_new = f(x_new);
      if (f_new <= out.f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = true;  // no descent at line-search resolution
      break;
    }

    double rel_change = std::abs(out.f - f_new) / (std::abs(out.f) + 1.0);
    Vec g_new = gradient(x_new, f_new);

    // BFGS inverse update.
    Vec s(d), yv(d);
    for (int i = 0; i < d; ++i) {
      s[i] = x_new[i] - out.x[i];
      yv[i] = g_new[i] - g[i];
    }
    double sy = kern::dot(s.data(), yv.data(), d);
    if (sy > 1e-12) {
      double rho = 1.0 / sy;
      // H <- (I - rho s y') H (I - rho y s') + rho s s'
      Vec hyv(d, 0.0);
      for (int i = 0; i < d; ++i) {
        double acc = 0;
        for (int j = 0; j < d; ++j) acc += h_inv[i][j] * yv[j];
        hyv[i] = acc;
      }
      double yhy = kern::dot(yv.data(), hyv.data(), d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          h_inv[i][j] += (sy + yhy) * rho * rho * s[i] * s[j] -
                         rho * (hyv[i] * s[j] + s[i] * hyv[j]);
    }

    out.x = std::move(x_new);
    out.f = f_new;
    g = std::move(g_new);
    out.trace.push_back(out.f);

    if (rel_change < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

double LmmFit::coef(const std::string& name) const {
  for (std::size_t i = 0; i < coef_names.size(); ++i)
    if (coef_names[i] == name) return beta[i];
  throw DataError("LmmFit: no coefficient named '" + name + "'");
}

double LmmFit::coef_se(const std::string& name) const {
  for (std::size_t i = 0; i < coef_names.size(); ++i)
    if (coef_names[i] == name) return se[i];
  throw DataError("LmmFit: no coefficient named '" + name + "'");
}

PlsSolution solve_pls(const DesignMatrix& dm, const Vec& theta) {
  PlsCache cache;
  cache.build(dm);
  if (theta.size() != cache.lay.term_names.size())
    throw DataError("solve_pls: theta size does not match random-term count");
  auto ev = cache.evaluate(theta);
  PlsSolution out;
  out.beta = ev.beta;
  out.pwrss = ev.pwrss;
  out.reml_criterion = cache.reml_criterion(ev);
  out.ml_criterion = cache.ml_criterion(ev);
  return out;
}

LmmFit fit_lmm(const DesignMatrix& dm, const FitOptions& opts) {
  PlsCache cache;
  cache.build(dm);
  const auto& lay = cache.lay;
  const int n_terms = static_cast<int>(lay.term_names.size());

  LmmFit fit;
  fit.variant = dm.variant;
  fit.coef_names = dm.col_names;
  fit.term_names = lay.term_names;

  // Degenerate response: no variance to model.
  double y_mean = 0;
  for (long r = 0; r < cache.n; ++r) y_mean += dm.y[r];
  y_mean /= static_cast<double>(cache.n);
  double y_var = 0;
  for (long r = 0; r < cache.n; ++r) y_var += (dm.y[r] - y_mean) * (dm.y[r] - y_mean);
  if (y_var <= 1e-12 * std::max(1.0, y_mean * y_mean)) {
    Vec theta(n_terms, 0.0);
    auto ev = cache.evaluate(theta);
    fit.beta = ev.beta;
    fit.se.assign(cache.p, 0.0);
    fit.sigma2 = 0.0;
    fit.term_variance.assign(n_terms, 0.0);
    fit.converged = true;
    fit.loglik_ml = 0.0;
    fit.reml_criterion = 0.0;
    fit.scaling = ScalingConstants{};
    for (int t = 0; t < n_terms; ++t) fit.theta_reml[lay.term_names[t]] = 0.0;
    return fit;
  }

  // v = log(theta^2); theta = exp(v / 2).
  auto theta_of = [&](const Vec& v) {
    Vec theta(n_terms);
    for (int t = 0; t < n_terms; ++t) theta[t] = std::exp(0.5 * v[t]);
    return theta;
  };
  auto reml_f = [&](const Vec& v) { return cache.reml_criterion(cache.evaluate(theta_of(v))); };
  auto ml_f = [&](const Vec& v) { return cache.ml_criterion(cache.evaluate(theta_of(v))); };

  const double v_floor = 2.0 * std::log(kThetaFloor);
  Vec v0(n_terms, 0.0);  // theta = 1: random SDs start at the residual scale

  auto reml_opt = minimize_bfgs(reml_f, v0, v_floor, opts.tol, opts.max_iter);
  if (!reml_opt.converged)
    throw NumericError("fit_lmm: REML optimizer did not converge within " +
                       std::to_string(opts.max_iter) + " iterations");

  Vec theta_hat = theta_of(reml_opt.x);
  auto ev = cache.evaluate(theta_hat);
  const double df = static_cast<double>(cache.n - cache.p);
  fit.sigma2 = ev.pwrss / df;
  fit.beta = ev.beta;
  fit.reml_criterion = reml_opt.f;
  fit.converged = true;
  fit.iterations = reml_opt.iterations;
  fit.criterion_trace = reml_opt.trace;

  // SE from the profiled GLS information: cov(beta) = sigma2 * S^-1.
  fit.se.assign(cache.p, 0.0);
  {
    Vec unit(cache.p, 0.0), w(cache.p), sol(cache.p);
    for (int j = 0; j < cache.p; ++j) {
      std::fill(unit.begin(), unit.end(), 0.0);
      unit[j] = 1.0;
      kern::solve_lower(ev.rx_factor, unit.data(), w.data());
      kern::solve_lower_transposed(ev.rx_factor, w.data(), sol.data());
      fit.se[j] = std::sqrt(std::max(0.0, fit.sigma2 * sol[j]));
    }
  }

  fit.term_variance.resize(n_terms);
  for (int t = 0; t < n_terms; ++t) {
    double th = theta_hat[t] <= kThetaFloor * (1 + 1e-9) ? 0.0 : theta_hat[t];
    fit.term_variance[t] = fit.sigma2 * th * th;
    fit.theta_reml[lay.term_names[t]] = th;
  }

  // Conditional modes b = lambda * u, keyed by term and level.
  {
    Vec lam = cache.lambda_per_column(theta_hat);
    for (int col = 0; col < lay.q; ++col) {
      const std::string& term = lay.term_names[lay.term_of_column[col]];
      bool is_participant = lay.term_of_column[col] == lay.n_item_terms;
      const std::string& level = is_participant
                                     ? lay.participant_levels[lay.level_of_column[col]]
                                     : lay.item_levels[lay.level_of_column[col]];
      fit.modes[term][level] = lam[col] * ev.u[col];
    }
  }

  if (opts.compute_ml) {
    std::vector<Vec> starts;
    starts.push_back(reml_opt.x);
    starts.push_back(Vec(n_terms, 0.0));
    for (const auto& warm : opts.ml_warm_starts) {
      Vec v(n_terms, v_floor);
      for (int t = 0; t < n_terms; ++t) {
        auto it = warm.find(lay.term_names[t]);
        if (it != warm.end() && it->second > kThetaFloor)
          v[t] = 2.0 * std::log(it->second);
      }
      starts.push_back(std::move(v));
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s0 : starts) {
      auto ml_opt = minimize_bfgs(ml_f, s0, v_floor, opts.tol, opts.max_iter);
      if (ml_opt.f < best) {
        best = ml_opt.f;
        for (int t = 0; t < n_terms; ++t)
          fit.theta_ml[lay.term_names[t]] = theta_of(ml_opt.x)[t];
      }
    }
    fit.loglik_ml = -0.5 * best;
  }
  return fit;
}

std::vector<RtPrediction> predict_rt(const LmmFit& fit, const DesignMatrix& rows) {
  if (rows.col_names != fit.coef_names)
    throw DataError("predict_rt: design columns do not match the fitted model");
  auto part_modes = fit.modes.find("(intercept)|participant");
  std::vector<RtPrediction> out;
  out.reserve(rows.x.rows);
  for (int r = 0; r < rows.x.rows; ++r) {
    RtPrediction pred;
    pred.rt_ms = kern::dot(rows.x[r], fit.beta.data(), rows.x.cols);
    pred.participant_seen = false;
    if (part_modes != fit.modes.end()) {
      auto it = part_modes->second.find(rows.participant_of_row[r]);
      if (it != part_modes->second.end()) {
        pred.rt_ms += it->second;
        pred.participant_seen = true;
      }
    }
    out.push_back(pred);
  }
  return out;
}

nlohmann::json LmmFit::to_json() const {
  nlohmann::json j;
  j["variant"] = to_string(variant);
  j["coefficients"] = nlohmann::json::array();
  for (std::size_t i = 0; i < coef_names.size(); ++i)
    j["coefficients"].push_back(
        {{"name", coef_names[i]}, {"estimate", beta[i]}, {"se", se[i]}});
  j["sigma2"] = sigma2;
  j["random_effects"] = nlohmann::json::array();
  for (std::size_t t = 0; t < term_names.size(); ++t)
    j["random_effects"].push_back(
        {{"term", term_names[t]}, {"variance", term_variance[t]}});
  j["reml_criterion"] = reml_criterion;
  j["loglik_ml"] = loglik_ml;
  j["converged"] = converged;
  j["iterations"] = iterations;
  j["scaling"] = scaling.to_json();
  j["modes"] = modes;
  j["theta_reml"] = theta_reml;
  j["theta_ml"] = theta_ml;
  return j;
}

LmmFit LmmFit::from_json(const nlohmann::json& j) {
  LmmFit fit;
  fit.variant = variant_from_string(j.at("variant"));
  for (const auto& c : j.at("coefficients")) {
    fit.coef_names.push_back(c.at("name"));
    fit.beta.push_back(c.at("estimate"));
    fit.se.push_back(c.at("se"));
  }
  fit.sigma2 = j.at("sigma2");
  for (const auto& t : j.at("random_effects")) {
    fit.term_names.push_back(t.at("term"));
    fit.term_variance.push_back(t.at("variance"));
  }
  fit.reml_criterion = j.at("reml_criterion");
  fit.loglik_ml = j.at("loglik_ml");
  fit.converged = j.at("converged");
  fit.iterations = j.at("iterations");
  fit.scaling = ScalingConstants::from_json(j.at("scaling"));
  fit.modes = j.at("modes")
                  .get<std::map<std::string, std::map<std::string, double>>>();
  fit.theta_reml = j.at("theta_reml").get<std::map<std::string, double>>();
  fit.theta_ml = j.at("theta_ml").get<std::map<std::string, double>>();
  return fit;
}

}  // namespace sslm
