#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "qdet/complex_matrix.hpp"

namespace qdet {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

/// Plain Nelder-Mead simplex minimizer. Deterministic given x0 and step.
/// Stops when the simplex value spread falls below tol or the evaluation
/// budget runs out.
inline NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    double step, double tol, int max_evaluations = 2000) {
  const std::size_t n = x0.size();
  NelderMeadResult result;

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    vals[i] = f(pts[i]);
    ++result.evaluations;
  }

  while (result.evaluations < max_evaluations) {
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&vals](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(),
                      second_worst = order[n - 1 < 1 ? 0 : n - 1];
    if (vals[worst] - vals[best] < tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    const auto blend = [&](double coeff) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k)
        p[k] = centroid[k] + coeff * (pts[worst][k] - centroid[k]);
      return p;
    };

    const std::vector<double> reflected = blend(-1.0);
    const double fr = f(reflected);
    ++result.evaluations;
    if (fr < vals[order[best]]) {
      const std::vector<double> expanded = blend(-2.0);
      const double fe = f(expanded);
      ++result.evaluations;
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
    } else if (fr < vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = fr;
    } else {
      const std::vector<double> contracted = blend(fr < vals[worst] ? -0.5 : 0.5);
      const double fc = f(contracted);
      ++result.evaluations;
      if (fc < std::min(vals[worst], fr)) {
        pts[worst] = contracted;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {  // shrink toward the best vertex
          if (i == best) continue;
          for (std::size_t k = 0; k < n; ++k)
            pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
          vals[i] = f(pts[i]);
          ++result.evaluations;
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (vals[i] < vals[best]) best = i;
  result.x = pts[best];
  result.value = vals[best];
  return result;
}

/// Pure state from 2(d-1) real parameters: hyperspherical amplitudes
/// (angles[0..d-2]) and relative phases (angles[d-1..2d-3]). The first
/// amplitude is real by convention.
inline std::vector<Complex> pure_state_from_angles(std::span<const double> params,
                                                   std::size_t d) {
  std::vector<Complex> psi(d);
  double sines = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    double amplitude = sines;
    if (k + 1 < d) {
      amplitude *= std::cos(params[k]);
      sines *= std::sin(params[k]);
    }
    if (k == 0)
      psi[k] = amplitude;
    else
      psi[k] = amplitude * std::exp(Complex{0.0, params[d - 2 + k]});
  }
  return psi;
}

}  // namespace qdet
