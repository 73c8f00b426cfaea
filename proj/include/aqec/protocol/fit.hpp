#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace aqec {

struct DecayFit {
  double f0 = 0.0;
  double tau = std::numeric_limits<double>::infinity();  // us
  double rms_residual = 0.0;
  int iterations = 0;
  bool degenerate = false;  // flat or non-decaying data
};

// Least-squares fit of F = f0 exp(-t / tau) + 0.25 (Levenberg-Marquardt on
// f0 and the rate 1/tau, seeded by a log-linear regression).
inline DecayFit fit_process_decay(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_process_decay: need at least 3 points");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXd t(n), f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t(i) = points[static_cast<std::size_t>(i)].first;
    f(i) = points[static_cast<std::size_t>(i)].second;
  }
  DecayFit out;
  if (f.maxCoeff() - f.minCoeff() < 1e-12 || t.maxCoeff() - t.minCoeff() <= 0.0) {
    out.degenerate = true;
    out.f0 = f.mean() - 0.25;
    return out;
  }

  // Log-linear seed from the points above the floor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (f(i) - 0.25 <= 1e-12) continue;
    const double y = std::log(f(i) - 0.25);
    sx += t(i); sy += y; sxx += t(i) * t(i); sxy += t(i) * y;
    ++m;
  }
  double rate = 1.0 / (t.maxCoeff() - t.minCoeff());
  double amp = f.maxCoeff() - 0.25;
  if (m >= 2 && m * sxx - sx * sx > 0.0) {
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (slope < 0.0) {
      rate = -slope;
      amp = std::exp((sy - slope * sx) / m);
    }
  }

  auto residual = [&](double a, double k) {
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = a * std::exp(-k * t(i)) + 0.25 - f(i);
    return r;
  };
  Eigen::VectorXd r = residual(amp, rate);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (out.iterations = 0; out.iterations < 500; ++out.iterations) {
    Eigen::MatrixXd j(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double e = std::exp(-rate * t(i));
      j(i, 0) = e;
      j(i, 1) = -amp * t(i) * e;
    }
    const Eigen::Matrix2d jtj = j.transpose() * j;
    const Eigen::Vector2d g = j.transpose() * r;
    bool improved = false;
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    for (int tries = 0; tries < 40 && !improved; ++tries) {
      Eigen::Matrix2d a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
      step = -a.ldlt().solve(g);
      const Eigen::VectorXd r2 = residual(amp + step(0), rate + step(1));
      const double c2 = r2.squaredNorm();
      if (std::isfinite(c2) && c2 <= cost) {
        amp += step(0);
        rate += step(1);
        r = r2;
        improved = c2 < cost;
        cost = c2;
        lambda = std::max(lambda / 10.0, 1e-15);
        if (!improved) break;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved || (std::abs(step(0)) <= 1e-15 * std::max(1.0, std::abs(amp)) &&
                      std::abs(step(1)) <= 1e-15 * std::max(1e-300, std::abs(rate)))) {
      break;
    }
  }
  out.f0 = amp;
  out.rms_residual = std::sqrt(cost / static_cast<double>(n));
  if (rate > 0.0) {
    out.tau = 1.0 / rate;
  } else {
    out.degenerate = true;
  }
  return out;
}

}  // namespace aqec
