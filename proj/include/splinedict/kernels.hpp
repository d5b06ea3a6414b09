#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP variant and a plain
// serial reference; tests hold the two to identical (or 1e-14) results and
// bench/ compares their throughput.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "splinedict/spline_mra.hpp"

namespace splinedict {

/// Closed uniform grid c, c + 2^-r, ..., d.
struct SampleGrid {
  std::int64_t c = 0;
  std::int64_t d = 8;
  int exponent = 7;

  std::int64_t size() const { return (d - c) * (std::int64_t{1} << exponent) + 1; }
  double x(std::int64_t s) const { return static_cast<double>(c) + std::ldexp(static_cast<double>(s), -exponent); }
  double step() const { return std::ldexp(1.0, -exponent); }
};

namespace kernels {

/// G(i, k) = <shape_i, shape_k> / (norm_i norm_k), unit diagonal.
Eigen::MatrixXd gram_serial(std::span<const Atom> atoms);
Eigen::MatrixXd gram_parallel(std::span<const Atom> atoms);

/// Raw (unnormalised) samples, one column per atom. The last grid point x = d
/// takes the left limit so restricted atoms keep their boundary value.
Eigen::MatrixXd sample_serial(std::span<const Atom> atoms, const SampleGrid& grid);
Eigen::MatrixXd sample_parallel(std::span<const Atom> atoms, const SampleGrid& grid);

/// mu(p), p = 1..max_p, via per-row sort of |G(w, l)|, l != w.
std::vector<double> coherence_serial(const Eigen::MatrixXd& gram, int max_p);
std::vector<double> coherence_parallel(const Eigen::MatrixXd& gram, int max_p);

struct Candidate {
  std::int64_t index = -1;
  double score = 0.0;
};

/// argmax_i |numer[i]| / sqrt(denom2[i]) over i with !excluded[i] and
/// sqrt(denom2[i]) >= threshold. Ties go to the lowest index.
Candidate best_candidate_serial(std::span<const double> numer, std::span<const double> denom2,
                                std::span<const char> excluded, double threshold);
Candidate best_candidate_parallel(std::span<const double> numer, std::span<const double> denom2,
                                  std::span<const char> excluded, double threshold);

/// B.col(i) -= q <q, B.col(i)> for every non-excluded column.
void deflate_serial(Eigen::MatrixXd& B, const Eigen::VectorXd& q, std::span<const char> excluded);
void deflate_parallel(Eigen::MatrixXd& B, const Eigen::VectorXd& q, std::span<const char> excluded);

}  // namespace kernels
}  // namespace splinedict
