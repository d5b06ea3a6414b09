#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "splinedict/kernels.hpp"

namespace splinedict {

/// cos(2 pi x^2) on the closed uniform grid of `samples` points over [c, d].
Eigen::VectorXd gen_chirp(double c, double d, std::int64_t samples);
Eigen::VectorXd gen_chirp(const SampleGrid& grid);

/// Linear resampling of uniformly spaced values onto `target` uniformly
/// spaced points covering the same interval.
Eigen::VectorXd resample_linear(std::span<const double> values, std::int64_t target);

struct LoadedSignal {
  Eigen::VectorXd samples;
  std::size_t original_length = 0;
  std::string path;
};

/// Reads one real per line (plain text, or CSV where the first field is
/// used; blank lines and lines starting with '#' are skipped), maps the
/// values uniformly onto the grid's [c, d] and resamples to the grid.
/// Throws std::runtime_error naming the offending line.
LoadedSignal load_signal(const std::string& path, const SampleGrid& grid);

}  // namespace splinedict
