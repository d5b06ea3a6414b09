#include "splinedict/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace splinedict::kernels {

namespace {

bool supports_overlap(const Atom& a, const Atom& b) {
  const auto pa = a.shape.breakpoints_double();
  const auto pb = b.shape.breakpoints_double();
  if (pa.empty() || pb.empty()) return false;
  return pa.front() < pb.back() && pb.front() < pa.back();
}

double normalized_ip(const Atom& a, const Atom& b) {
  if (!supports_overlap(a, b)) return 0.0;
  return inner_product(a.shape, b.shape) / (a.norm * b.norm);
}

double sample_value(const Atom& a, const SampleGrid& grid, std::int64_t s, std::int64_t last) {
  const double x = grid.x(s);
  return s == last ? a.shape.left_limit(x) : a.shape(x);
}

bool better(const Candidate& a, const Candidate& b) {
  if (a.index < 0) return false;
  if (b.index < 0) return true;
  return a.score > b.score || (a.score == b.score && a.index < b.index);
}

void top_sums(const Eigen::MatrixXd& gram, Eigen::Index w, int max_p, std::vector<double>& row,
              std::vector<double>& out) {
  const Eigen::Index n = gram.rows();
  row.clear();
  for (Eigen::Index l = 0; l < n; ++l)
    if (l != w) row.push_back(std::abs(gram(w, l)));
  std::partial_sort(row.begin(), row.begin() + max_p, row.end(), std::greater<>());
  double acc = 0.0;
  for (int p = 0; p < max_p; ++p) {
    acc += row[p];
    out[p] = std::max(out[p], acc);
  }
}

}  // namespace

Eigen::MatrixXd gram_serial(std::span<const Atom> atoms) {
  const auto n = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const double v = normalized_ip(atoms[i], atoms[k]);
      g(i, k) = v;
      g(k, i) = v;
    }
  return g;
}

Eigen::MatrixXd gram_parallel(std::span<const Atom> atoms) {
  const auto n = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = i + 1; k < n; ++k) g(i, k) = normalized_ip(atoms[i], atoms[k]);
  g.triangularView<Eigen::StrictlyLower>() = g.transpose().triangularView<Eigen::StrictlyLower>();
  return g;
}

Eigen::MatrixXd sample_serial(std::span<const Atom> atoms, const SampleGrid& grid) {
  const std::int64_t rows = grid.size();
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::int64_t s = 0; s < rows; ++s) a(s, i) = sample_value(atoms[i], grid, s, rows - 1);
  return a;
}

Eigen::MatrixXd sample_parallel(std::span<const Atom> atoms, const SampleGrid& grid) {
  const std::int64_t rows = grid.size();
  const auto cols = static_cast<std::int64_t>(atoms.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < cols; ++i) {
    const Atom& atom = atoms[i];
    const auto bp = atom.shape.breakpoints_double();
    if (bp.empty()) continue;
    // Only visit grid points inside the (closed) support.
    const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((bp.front() - grid.c) / grid.step())));
    const auto hi = std::min<std::int64_t>(rows - 1, static_cast<std::int64_t>(std::ceil((bp.back() - grid.c) / grid.step())));
    for (std::int64_t s = lo; s <= hi; ++s) a(s, i) = sample_value(atom, grid, s, rows - 1);
  }
  return a;
}

std::vector<double> coherence_serial(const Eigen::MatrixXd& gram, int max_p) {
  std::vector<double> mu(max_p, 0.0);
  std::vector<double> row;
  for (Eigen::Index w = 0; w < gram.rows(); ++w) top_sums(gram, w, max_p, row, mu);
  return mu;
}

std::vector<double> coherence_parallel(const Eigen::MatrixXd& gram, int max_p) {
  std::vector<double> mu(max_p, 0.0);
#pragma omp parallel
  {
    std::vector<double> local(max_p, 0.0);
    std::vector<double> row;
#pragma omp for schedule(static)
    for (Eigen::Index w = 0; w < gram.rows(); ++w) top_sums(gram, w, max_p, row, local);
#pragma omp critical
    for (int p = 0; p < max_p; ++p) mu[p] = std::max(mu[p], local[p]);
  }
  return mu;
}

Candidate best_candidate_serial(std::span<const double> numer, std::span<const double> denom2,
                                std::span<const char> excluded, double threshold) {
  Candidate best;
  const double t2 = threshold * threshold;
  for (std::size_t i = 0; i < numer.size(); ++i) {
    if (excluded[i] || !(denom2[i] >= t2) || denom2[i] <= 0.0) continue;
    const Candidate c{static_cast<std::int64_t>(i), std::abs(numer[i]) / std::sqrt(denom2[i])};
    if (better(c, best)) best = c;
  }
  return best;
}

Candidate best_candidate_parallel(std::span<const double> numer, std::span<const double> denom2,
                                  std::span<const char> excluded, double threshold) {
  Candidate best;
  const double t2 = threshold * threshold;
  const auto n = static_cast<std::int64_t>(numer.size());
#pragma omp parallel
  {
    Candidate local;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      if (excluded[i] || !(denom2[i] >= t2) || denom2[i] <= 0.0) continue;
      const Candidate c{i, std::abs(numer[i]) / std::sqrt(denom2[i])};
      if (better(c, local)) local = c;
    }
#pragma omp critical
    if (better(local, best)) best = local;
  }
  return best;
}

void deflate_serial(Eigen::MatrixXd& B, const Eigen::VectorXd& q, std::span<const char> excluded) {
  for (Eigen::Index i = 0; i < B.cols(); ++i) {
    if (excluded[i]) continue;
    const double proj = q.dot(B.col(i));
    B.col(i) -= proj * q;
  }
}

void deflate_parallel(Eigen::MatrixXd& B, const Eigen::VectorXd& q, std::span<const char> excluded) {
  const Eigen::Index cols = B.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < cols; ++i) {
    if (excluded[i]) continue;
    const double proj = q.dot(B.col(i));
    B.col(i) -= proj * q;
  }
}

}  // namespace splinedict::kernels
