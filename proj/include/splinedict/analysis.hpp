#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "splinedict/spline_mra.hpp"

namespace splinedict {

/// mu[p - 1] = cumulative coherence mu(p).
struct CoherenceCurve {
  std::vector<double> mu;

  int max_p() const { return static_cast<int>(mu.size()); }
  double operator()(int p) const { return mu.at(static_cast<std::size_t>(p - 1)); }
  /// "p,mu" header then one row per p.
  std::string to_csv() const;
};

/// mu(p) = max_w (sum of the p largest |G(w, l)|, l != w), p = 1..max_p.
/// `gram` must come from unit-norm atoms; requires 1 <= max_p < size.
CoherenceCurve cumulative_coherence(const Eigen::MatrixXd& gram, int max_p);

/// h with psi(y) = sum_i h[i] phi(2^l y - i): the wavelet filter q refined
/// l - 1 times through the B-spline two-scale filter.
std::vector<double> refinement_filter(int order, int refine);

/// psi_{j,k} = sum_{n = n_lo}^{n_hi} g[n - n_lo] phi_{j+l,n} on [c, d].
struct RefinementExpansion {
  int scale = 0;
  int refine = 1;
  Dyadic translation;
  std::int64_t n_lo = 0;
  std::int64_t n_hi = -1;
  std::vector<double> g;

  double coefficient(std::int64_t n) const {
    return (n < n_lo || n > n_hi) ? 0.0 : g[static_cast<std::size_t>(n - n_lo)];
  }
};

/// Fine-scale expansion of the wavelet atom psi_{j,k} (j = params.scale),
/// clipped to fine B-splines that meet (c, d). Throws std::invalid_argument
/// if k is not in (2^j c - w, 2^j d) on Z/2^l or l < 1.
RefinementExpansion refinement_expansion(const SpaceParams& params, const Dyadic& k, int refine);

/// Coefficients of phi_{j+l,n} over `family` (the atoms of W_{j,l}) from the
/// pivot back-substitution. Rows of the matrix version are indexed by
/// n - (2^{j+l} c - m + 1).
std::vector<double> express_fine_scaling(std::int64_t n, const SpaceParams& params, int refine,
                                         std::span<const Atom> family);
Eigen::MatrixXd express_all_fine_scaling(const SpaceParams& params, int refine, std::span<const Atom> family);

/// Relative L2 error of sum_i coeffs[i] * family[i].shape against phi_{j+l,n}.
double fine_scaling_reconstruction_error(std::int64_t n, const SpaceParams& params, int refine,
                                         std::span<const Atom> family, std::span<const double> coeffs);

inline constexpr double kRankCutoff = 1e-8;

/// Eigenvalues of a symmetric PSD matrix above cutoff * max.
int numerical_rank(const Eigen::MatrixXd& gram, double cutoff = kRankCutoff);

/// Rank of the atoms' B-spline coefficient matrix in V_target, computed
/// exactly modulo the prime 2^61 - 1. Every atom is an integer combination
/// (up to a per-atom scalar) of fine B-splines, and rank mod p never exceeds
/// rank over Q, so the result is a certified lower bound on dim span(atoms).
/// Unlike the eigen-rank it does not depend on conditioning. Atoms must lie in
/// V_target (see SpanReport::inclusion_ok).
int exact_rank_lower_bound(std::span<const Atom> atoms, const SpaceParams& target);

struct SpanReport {
  std::size_t atom_count = 0;
  std::int64_t expected_dim = 0;
  int exact_rank = 0;
  int gram_rank = 0;
  int sampled_rank = 0;
  double max_projection_residual = 0.0;
  bool inclusion_ok = false;
  bool pass = false;
};

/// Checks span(atoms) == V_target: inclusion (knots and degree), exact-Gram
/// eigen-rank, sampled rank, and least-squares projection of every fine
/// B-spline of V_target onto the sampled span (relative residual <= 1e-8).
/// `pass` uses the numerical checks only; exact_rank is reported alongside.
SpanReport verify_span(std::span<const Atom> atoms, const SpaceParams& target);

}  // namespace splinedict
