#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace splinedict {

enum class ToleranceMode { Relative, Absolute };

struct PursuitConfig {
  /// Target residual: ||f - f^N|| <= tolerance * ||f|| (Relative) or <= tolerance.
  double tolerance = 1e-2;
  ToleranceMode mode = ToleranceMode::Relative;
  /// 0 means min(rows, cols).
  std::size_t max_atoms = 0;
  bool swap_enabled = true;
  bool backward_enabled = true;
  /// Swap acceptance margin; negative means 1e-12 * ||f||.
  double swap_margin = -1.0;
  /// Candidates whose component orthogonal to the selected span has norm
  /// below this (columns are unit norm) are skipped.
  double in_span_threshold = 1e-7;
  /// Candidates that would lift the condition estimate ||A_S||_F ||A_S^+||_F
  /// of the selected columns above this are skipped too; past it the
  /// coefficients stop being meaningful even though the projection is fine.
  double max_condition = 1e8;
  std::size_t max_swap_passes = 100;
  /// Use the OpenMP kernels; false runs the serial references.
  bool parallel = true;

  void validate(std::size_t dictionary_size) const;
  double target_residual(double signal_norm) const;
  double margin(double signal_norm) const;
};

struct StageResult {
  std::string stage;
  std::size_t atoms = 0;
  double residual = 0.0;
};

/// f^N = sum_n coefficients[n] * A.col(indices[n]), the orthogonal projection
/// of f onto the span of the selected columns.
struct AtomicDecomposition {
  std::vector<std::size_t> indices;
  Eigen::VectorXd coefficients;
  double residual_norm = 0.0;
  double signal_norm = 0.0;
  bool converged = false;

  std::vector<double> forward_history;   ///< residual after each selection
  std::vector<double> swap_history;      ///< residual after each accepted swap
  std::vector<double> backward_history;  ///< residual after each removal
  std::vector<StageResult> stages;
  std::size_t swaps_accepted = 0;
  /// Largest relative gap seen between the incremental projection
  /// coefficients and a direct least-squares solve.
  double projection_check = 0.0;

  std::size_t size() const { return indices.size(); }
};

/// Orthonormal basis of the selected columns (Gram-Schmidt, each new vector
/// orthogonalised twice) together with R = Q^T A_S, upper triangular.
class OrthogonalProjector {
public:
  /// Columns whose reorthogonalised remainder has norm <= min_norm * max(1, ||column||)
  /// count as already inside the span.
  /// With max_condition finite, columns that would push the Frobenius
  /// condition estimate above it are refused as well.
  OrthogonalProjector(Eigen::Index rows, std::size_t capacity, double min_norm = kDefaultMinNorm,
                      double max_condition = kNoConditionLimit);
  OrthogonalProjector(const Eigen::MatrixXd& A, std::span<const std::size_t> indices,
                      double min_norm = kDefaultMinNorm, double max_condition = kNoConditionLimit);

  static constexpr double kDefaultMinNorm = 1e-14;
  static constexpr double kNoConditionLimit = std::numeric_limits<double>::infinity();

  /// Returns false (and leaves the state unchanged) when the column is
  /// numerically inside the current span.
  bool append(const Eigen::Ref<const Eigen::VectorXd>& column);

  std::size_t size() const { return size_; }
  auto basis() const { return q_.leftCols(static_cast<Eigen::Index>(size_)); }
  auto r_factor() const {
    return r_.topLeftCorner(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
  }
  auto r_inverse() const {
    return rinv_.topLeftCorner(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
  }
  /// ||A_S||_F ||R^-1||_F, an upper bound on the 2-norm condition number.
  double condition_estimate() const { return std::sqrt(column_norm2_ * inverse_norm2_); }
  const Eigen::VectorXd& last_direction() const { return last_; }

  Eigen::VectorXd coefficients(const Eigen::VectorXd& f) const;
  Eigen::VectorXd residual(const Eigen::VectorXd& f) const;

private:
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
  Eigen::MatrixXd rinv_;
  Eigen::VectorXd last_;
  std::size_t size_ = 0;
  double min_norm_;
  double max_condition_;
  double column_norm2_ = 0.0;
  double inverse_norm2_ = 0.0;
};

/// Direct least-squares coefficients on the selected columns (column-pivoted QR).
Eigen::VectorXd least_squares_coefficients(const Eigen::MatrixXd& A, std::span<const std::size_t> indices,
                                           const Eigen::VectorXd& f);

/// max_n |<f - f^N, a_{l_n}>| / ||f||.
double residual_correlation(const Eigen::MatrixXd& A, const Eigen::VectorXd& f, const AtomicDecomposition& dec);

/// Stage i: optimized orthogonal selection, one atom at a time, maximising
/// |<r, b_i>| / ||b_i|| with b_i the part of a_i orthogonal to the selected span.
AtomicDecomposition forward_select(const Eigen::VectorXd& f, const Eigen::MatrixXd& A, const PursuitConfig& cfg);

/// Stage ii: replace held atoms by better dictionary atoms while the residual
/// drops by more than the margin; repeat until a full pass changes nothing.
AtomicDecomposition swap_refine(const AtomicDecomposition& dec, const Eigen::VectorXd& f,
                                const Eigen::MatrixXd& A, const PursuitConfig& cfg);

/// Stage iii: drop the atom whose removal costs least while the residual
/// stays <= budget (absolute).
AtomicDecomposition backward_prune(const AtomicDecomposition& dec, const Eigen::VectorXd& f,
                                   const Eigen::MatrixXd& A, double budget);

/// Stages i-iii with the forward target as backward budget.
AtomicDecomposition approximate(const Eigen::VectorXd& f, const Eigen::MatrixXd& A, const PursuitConfig& cfg);

}  // namespace splinedict
