#include "splinedict/signals.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace splinedict {

Eigen::VectorXd gen_chirp(double c, double d, std::int64_t samples) {
  if (samples < 2) throw std::invalid_argument("gen_chirp: need at least 2 samples");
  Eigen::VectorXd f(samples);
  const double h = (d - c) / static_cast<double>(samples - 1);
  for (std::int64_t s = 0; s < samples; ++s) {
    const double x = c + h * static_cast<double>(s);
    f[s] = std::cos(2.0 * std::numbers::pi * x * x);
  }
  return f;
}

Eigen::VectorXd gen_chirp(const SampleGrid& grid) {
  Eigen::VectorXd f(grid.size());
  for (std::int64_t s = 0; s < grid.size(); ++s) {
    const double x = grid.x(s);
    f[s] = std::cos(2.0 * std::numbers::pi * x * x);
  }
  return f;
}

Eigen::VectorXd resample_linear(std::span<const double> values, std::int64_t target) {
  if (values.size() < 2) throw std::invalid_argument("resample_linear: need at least 2 values");
  if (target < 2) throw std::invalid_argument("resample_linear: need at least 2 target points");
  const auto n = static_cast<std::int64_t>(values.size());
  Eigen::VectorXd out(target);
  for (std::int64_t s = 0; s < target; ++s) {
    // Exact rational position s (n-1)/(target-1) to keep grid hits exact.
    const std::int64_t num = s * (n - 1);
    const std::int64_t i = num / (target - 1);
    const std::int64_t rem = num % (target - 1);
    if (rem == 0 || i >= n - 1) {
      out[s] = values[static_cast<std::size_t>(std::min(i, n - 1))];
    } else {
      const double t = static_cast<double>(rem) / static_cast<double>(target - 1);
      out[s] = (1.0 - t) * values[static_cast<std::size_t>(i)] + t * values[static_cast<std::size_t>(i + 1)];
    }
  }
  return out;
}

LoadedSignal load_signal(const std::string& path, const SampleGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_signal: cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto end = line.find_first_of(",;\t \r", first);
    if (end == std::string::npos) end = line.size();
    const std::string field = line.substr(first, end - first);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || !std::isfinite(v))
      throw std::runtime_error("load_signal: " + path + ":" + std::to_string(line_no) + ": not a finite real: '" +
                               field + "'");
    values.push_back(v);
  }
  if (values.empty()) throw std::runtime_error("load_signal: " + path + ": no samples");
  if (values.size() < 2) throw std::runtime_error("load_signal: " + path + ": need at least 2 samples");
  LoadedSignal sig;
  sig.path = path;
  sig.original_length = values.size();
  sig.samples = resample_linear(values, grid.size());
  return sig;
}

}  // namespace splinedict
