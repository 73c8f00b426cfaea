#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqec/core/matrix.hpp"

namespace aqec {

// Piecewise-constant controls: values(x, i) is channel x on [t_i - dt, t_i].
struct PulseGrid {
  double dt = 0.002;  // us
  std::vector<std::string> channels;
  RealMatrix values;  // channels x samples, rad/us

  PulseGrid() = default;
  PulseGrid(double dt_us, std::vector<std::string> names, Eigen::Index samples)
      : dt(dt_us), channels(std::move(names)),
        values(RealMatrix::Zero(static_cast<Eigen::Index>(channels.size()), samples)) {
    validate();
  }

  Eigen::Index samples() const { return values.cols(); }
  Eigen::Index channel_count() const { return values.rows(); }
  double duration() const { return dt * static_cast<double>(samples()); }

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("PulseGrid: dt must be positive");
    if (static_cast<Eigen::Index>(channels.size()) != values.rows()) {
      throw std::invalid_argument("PulseGrid: channel names do not match value rows");
    }
  }

  // Row-major flattening (channel-major), used by the optimizer.
  RealVector flatten() const {
    RealVector v(values.size());
    for (Eigen::Index x = 0; x < values.rows(); ++x)
      v.segment(x * values.cols(), values.cols()) = values.row(x).transpose();
    return v;
  }

  void assign(const RealVector& v) {
    if (v.size() != values.size()) throw std::invalid_argument("PulseGrid: size mismatch");
    for (Eigen::Index x = 0; x < values.rows(); ++x)
      values.row(x) = v.segment(x * values.cols(), values.cols()).transpose();
  }
};

inline Eigen::Index samples_for(double duration, double dt) {
  const double n = duration / dt;
  const auto r = static_cast<Eigen::Index>(std::llround(n));
  if (r < 1 || std::abs(n - static_cast<double>(r)) > 1e-6) {
    throw std::invalid_argument("duration is not a positive multiple of dt");
  }
  return r;
}

// Seeded white noise smoothed by a Gaussian kernel, scaled to the requested
// RMS amplitude per channel.
inline PulseGrid smooth_noise_pulse(double dt, std::vector<std::string> channels,
                                    Eigen::Index samples, double rms, double sigma_samples,
                                    std::uint64_t seed) {
  PulseGrid p(dt, std::move(channels), samples);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int half = static_cast<int>(std::ceil(3.0 * sigma_samples));
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  for (int k = -half; k <= half; ++k) {
    kernel[static_cast<std::size_t>(k + half)] =
        std::exp(-0.5 * k * k / (sigma_samples * sigma_samples));
  }
  for (Eigen::Index x = 0; x < p.channel_count(); ++x) {
    std::vector<double> white(static_cast<std::size_t>(samples));
    for (auto& w : white) w = normal(rng);
    double sq = 0.0;
    for (Eigen::Index i = 0; i < samples; ++i) {
      double s = 0.0;
      for (int k = -half; k <= half; ++k) {
        const Eigen::Index j = i + k;
        if (j >= 0 && j < samples) {
          s += kernel[static_cast<std::size_t>(k + half)] * white[static_cast<std::size_t>(j)];
        }
      }
      p.values(x, i) = s;
      sq += s * s;
    }
    const double cur = std::sqrt(sq / static_cast<double>(samples));
    if (cur > 0.0) p.values.row(x) *= rms / cur;
  }
  return p;
}

}  // namespace aqec
