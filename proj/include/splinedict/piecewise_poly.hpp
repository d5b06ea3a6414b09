#pragma once

#include <span>
#include <utility>
#include <vector>

#include "splinedict/dyadic.hpp"

namespace splinedict {

/// Piecewise polynomial with exact dyadic breakpoints.
///
/// Piece i lives on [b_i, b_{i+1}) and stores ascending-power coefficients in
/// the local coordinate t = (x - b_i) / (b_{i+1} - b_i), t in [0, 1]. Dilation
/// and translation by dyadic amounts therefore only move breakpoints.
/// An empty breakpoint list is the zero function.
class PiecewisePoly {
public:
  using Coeffs = std::vector<double>;

  PiecewisePoly() = default;
  PiecewisePoly(std::vector<Dyadic> breakpoints, std::vector<Coeffs> pieces);

  const std::vector<Dyadic>& breakpoints() const { return breakpoints_; }
  const std::vector<Coeffs>& pieces() const { return pieces_; }
  std::span<const double> breakpoints_double() const { return bp_double_; }

  /// True for the canonical zero function or when every coefficient is 0.
  bool is_zero() const;
  /// [first, last] breakpoint; {0, 0} for the zero function.
  std::pair<Dyadic, Dyadic> support() const;
  int max_degree() const;
  std::size_t piece_count() const { return pieces_.size(); }

  /// Right-continuous evaluation, 0 outside [first, last).
  double operator()(double x) const;
  /// Left limit at x, 0 outside (first, last].
  double left_limit(double x) const;

  /// Value of piece i at local coordinate t.
  double piece_value(std::size_t i, double t) const;

private:
  std::vector<Dyadic> breakpoints_;
  std::vector<double> bp_double_;
  std::vector<Coeffs> pieces_;
};

double evaluate(const PiecewisePoly& p, double x);
double evaluate_left(const PiecewisePoly& p, double x);

/// Exact L2 inner product over the common support (Gauss-Legendre per merged
/// interval, enough nodes for the product degree).
double inner_product(const PiecewisePoly& p, const PiecewisePoly& q);

/// Sum of coeffs[i] * terms[i] on the merged breakpoint set.
/// Throws std::invalid_argument on length mismatch or empty input.
PiecewisePoly linear_combination(std::span<const double> coeffs,
                                 std::span<const PiecewisePoly> terms);

/// Clip to [lo, hi]; zero function if there is no overlap.
PiecewisePoly restrict_to(const PiecewisePoly& p, const Dyadic& lo, const Dyadic& hi);

/// x -> amplitude * p(2^scale * x - shift).
PiecewisePoly dilate_translate(const PiecewisePoly& p, int scale, const Dyadic& shift,
                               double amplitude = 1.0);

/// Re-express a local polynomial on the sub-interval [t0, t0 + h] of [0, 1].
PiecewisePoly::Coeffs reparametrize(std::span<const double> coeffs, double t0, double h);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

}  // namespace splinedict
