#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace latentlob {

/// Result of a weighted linear least-squares fit y = slope*x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double r2 = 0.0;
  size_t n_used = 0;
  size_t n_excluded = 0;
  bool ok = false;
};

/// Weighted least squares. `w` are inverse-variance weights (w_i = 1/sigma_i^2);
/// pass an empty vector for an unweighted fit. Parameter errors are scaled by
/// the reduced chi-square so under- or over-stated input errors do not
/// understate the fit uncertainty.
inline LinearFit wls_linear(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::vector<double>& w = {}) {
  LinearFit f;
  const size_t n = x.size();
  if (n != y.size() || (!w.empty() && w.size() != n) || n < 2) return f;
  double W = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    if (!(wi > 0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      ++f.n_excluded;
      continue;
    }
    W += wi;
    sx += wi * x[i];
    sy += wi * y[i];
    sxx += wi * x[i] * x[i];
    sxy += wi * x[i] * y[i];
    ++f.n_used;
  }
  if (f.n_used < 2) return f;
  const double delta = W * sxx - sx * sx;
  if (!(delta > 0)) return f;
  f.slope = (W * sxy - sx * sy) / delta;
  f.intercept = (sxx * sy - sx * sxy) / delta;

  double chi2 = 0, sst = 0;
  const double ybar = sy / W;
  for (size_t i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    if (!(wi > 0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    chi2 += wi * r * r;
    sst += wi * (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = sst > 0 ? 1.0 - chi2 / sst : 1.0;
  const double dof = static_cast<double>(f.n_used) - 2.0;
  const double scale = dof > 0 ? std::max(chi2 / dof, w.empty() ? chi2 / dof : 1.0) : 1.0;
  f.slope_se = std::sqrt(scale * W / delta);
  f.intercept_se = std::sqrt(scale * sxx / delta);
  f.ok = true;
  return f;
}

/// Power-law fit y = A * x^slope via log-log WLS. Points with non-positive x,
/// y or non-finite error are excluded and counted. `yerr` may be empty.
inline LinearFit wls_loglog(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::vector<double>& yerr = {}) {
  std::vector<double> lx, ly, lw;
  size_t n_excluded = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0) || !std::isfinite(y[i])) {
      ++n_excluded;
      continue;
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    if (!yerr.empty()) {
      const double rel = yerr[i] > 0 ? yerr[i] / y[i] : 0.0;
      lw.push_back(rel > 0 ? 1.0 / (rel * rel) : 0.0);
    }
  }
  if (!lw.empty()) {
    // Points with zero stated error get the largest finite weight seen.
    double wmax = 0;
    for (double v : lw) wmax = std::max(wmax, v);
    if (wmax == 0) wmax = 1;
    for (double& v : lw) {
      if (v == 0) v = wmax;
    }
  }
  LinearFit f = wls_linear(lx, ly, lw);
  f.n_excluded += n_excluded;
  return f;
}

}  // namespace latentlob
