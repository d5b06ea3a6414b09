#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splinedict/dyadic.hpp"
#include "splinedict/piecewise_poly.hpp"

namespace splinedict {

inline constexpr int kMaxOrder = 10;

/// Spline order m, interval [c, d] and scale j of a space V_j / W_j.
struct SpaceParams {
  int order = 4;
  std::int64_t c = 0;
  std::int64_t d = 8;
  int scale = 0;

  /// Length of the wavelet support, 2m - 1.
  int wavelet_length() const { return 2 * order - 1; }
  /// dim V_j = (d - c) 2^j + m - 1.
  std::int64_t dim_V() const { return (d - c) * (std::int64_t{1} << scale) + order - 1; }
  /// dim W_j = (d - c) 2^j.
  std::int64_t dim_W() const { return (d - c) * (std::int64_t{1} << scale); }

  SpaceParams at_scale(int j) const { return {order, c, d, j}; }

  /// Order, interval and scale ranges. Throws std::invalid_argument.
  void validate() const;
  /// Additionally requires d - c >= max(m, w) so one interior scaling
  /// function and one interior wavelet fit at scale 0 (cut-off bases).
  void validate_cutoff_basis() const;

  std::string describe() const;
};

enum class AtomKind { Scaling, Wavelet };
const char* to_string(AtomKind kind);

/// phi_{j,k} or psi_{j,k} restricted to [c, d]; `shape` is not normalised.
struct Atom {
  AtomKind kind = AtomKind::Scaling;
  int scale = 0;
  Dyadic translation;
  int order = 0;
  PiecewisePoly shape;
  double norm = 0.0;

  /// Support before restriction: [k, k + m] / 2^j or [k, k + w] / 2^j.
  std::pair<Dyadic, Dyadic> unrestricted_support() const;
};

/// Cardinal B-spline of order m on knots 0..m (integral 1).
PiecewisePoly bspline(int m);

/// phi_m(n) at an integer n, computed from the integer truncated-power sum.
double bspline_at_integer(int m, std::int64_t n);

/// p_n = 2^{1-m} binom(m, n), n = 0..m: phi(x) = sum_n p_n phi(2x - n).
std::vector<double> bspline_two_scale(int m);

struct Wavelet {
  PiecewisePoly psi;
  std::vector<double> q;  ///< psi(x) = sum_n q[n] phi(2x - n), n = 0..3m-2
};

/// Chui-Wang semi-orthogonal spline wavelet of order m, supp = [0, 2m - 1],
/// normalised so that q[0] > 0.
Wavelet chui_wang_wavelet(int m);

/// q_n * 2^{m-1} (2m-1)! reduced mod `prime` (exact integers before reduction).
std::vector<std::uint64_t> chui_wang_numerators_mod(int m, std::uint64_t prime);

/// Cached prototypes (thread-safe, built on first use).
const PiecewisePoly& bspline_prototype(int m);
const Wavelet& wavelet_prototype(int m);

/// 2^{j/2} phi(2^j x - k) restricted to [c, d].
Atom make_scaling_atom(const SpaceParams& params, const Dyadic& k);
/// 2^{j/2} psi(2^j x - k) restricted to [c, d].
Atom make_wavelet_atom(const SpaceParams& params, const Dyadic& k);

/// Cut-off B-spline basis of V_j: k in (2^j c - m, 2^j d) integer.
std::vector<Atom> basis_V(const SpaceParams& params);

/// Integer translation range [first, last] of the cut-off wavelet basis of W_j.
std::pair<std::int64_t, std::int64_t> basis_W_range(const SpaceParams& params);

/// Cut-off wavelet basis of W_j: of the translates meeting (c, d), drop the
/// first ceil(z) and last floor(z), z = (w - 1) / 2.
std::vector<Atom> basis_W(const SpaceParams& params);

}  // namespace splinedict
