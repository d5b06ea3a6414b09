#include "splinedict/spline_mra.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace splinedict {

namespace {

using Int = __int128;

// Large enough for order 2 * kMaxOrder (needed by the Chui-Wang coefficients).
constexpr int kMaxBsplineOrder = 2 * kMaxOrder;

Int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Int ipow(Int b, int e) {
  Int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

long double factorial(int n) {
  long double r = 1.0L;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_order(int m, int max_order) {
  if (m < 1) throw std::invalid_argument("spline order must be >= 1, got " + std::to_string(m));
  if (m > max_order)
    throw std::invalid_argument("spline order " + std::to_string(m) + " exceeds supported maximum " +
                                std::to_string(max_order));
}

// Integer numerator of (m-1)! * phi_m(i + t), coefficient of t^p.
Int bspline_numerator(int m, int piece, int p) {
  Int sum = 0;
  for (int l = 0; l <= piece; ++l) {
    const Int term = binom(m, l) * ipow(piece - l, m - 1 - p);
    sum += (l % 2 == 0) ? term : -term;
  }
  return sum * binom(m - 1, p);
}

}  // namespace

void SpaceParams::validate() const {
  if (order < 2 || order > kMaxOrder)
    throw std::invalid_argument("order must be in [2, " + std::to_string(kMaxOrder) + "], got " +
                                std::to_string(order));
  if (d <= c) throw std::invalid_argument("interval requires d > c");
  if (scale < 0 || scale > 20) throw std::invalid_argument("scale must be in [0, 20]");
}

void SpaceParams::validate_cutoff_basis() const {
  validate();
  if (d - c < std::max(order, wavelet_length()))
    throw std::invalid_argument("interval [" + std::to_string(c) + "," + std::to_string(d) +
                                "] too short: need d - c >= max(m, 2m - 1) = " +
                                std::to_string(std::max(order, wavelet_length())));
}

std::string SpaceParams::describe() const {
  return "m=" + std::to_string(order) + " [" + std::to_string(c) + "," + std::to_string(d) +
         "] j=" + std::to_string(scale);
}

const char* to_string(AtomKind kind) { return kind == AtomKind::Scaling ? "scaling" : "wavelet"; }

std::pair<Dyadic, Dyadic> Atom::unrestricted_support() const {
  const int len = kind == AtomKind::Scaling ? order : 2 * order - 1;
  return {translation.scaled(-scale), (translation + Dyadic(len)).scaled(-scale)};
}

PiecewisePoly bspline(int m) {
  check_order(m, kMaxBsplineOrder);
  const long double denom = factorial(m - 1);
  std::vector<Dyadic> bp;
  std::vector<PiecewisePoly::Coeffs> pieces;
  for (int i = 0; i <= m; ++i) bp.emplace_back(i);
  for (int i = 0; i < m; ++i) {
    PiecewisePoly::Coeffs c(m);
    for (int p = 0; p < m; ++p)
      c[p] = static_cast<double>(static_cast<long double>(bspline_numerator(m, i, p)) / denom);
    pieces.push_back(std::move(c));
  }
  return PiecewisePoly(std::move(bp), std::move(pieces));
}

double bspline_at_integer(int m, std::int64_t n) {
  check_order(m, kMaxBsplineOrder);
  if (n < 0 || n >= m) return 0.0;
  return static_cast<double>(static_cast<long double>(bspline_numerator(m, static_cast<int>(n), 0)) /
                             factorial(m - 1));
}

std::vector<double> bspline_two_scale(int m) {
  check_order(m, kMaxBsplineOrder);
  std::vector<double> p(m + 1);
  for (int n = 0; n <= m; ++n)
    p[n] = std::ldexp(static_cast<double>(binom(m, n)), 1 - m);
  return p;
}

Wavelet chui_wang_wavelet(int m) {
  check_order(m, kMaxOrder);
  // q_n = (-1)^n 2^{1-m} sum_l binom(m, l) phi_{2m}(n - l + 1), with phi_{2m}
  // at integers carried as exact numerators over (2m-1)!.
  const int order2 = 2 * m;
  const long double denom = factorial(order2 - 1) * std::ldexp(1.0L, m - 1);
  const int count = 3 * m - 1;
  std::vector<double> q(count);
  for (int n = 0; n < count; ++n) {
    Int sum = 0;
    for (int l = 0; l <= m; ++l) {
      const int x = n - l + 1;
      if (x <= 0 || x >= order2) continue;
      sum += binom(m, l) * bspline_numerator(order2, x, 0);
    }
    if (n % 2 == 1) sum = -sum;
    q[n] = static_cast<double>(static_cast<long double>(sum) / denom);
  }

  // psi on [s/2, (s+1)/2): sum over n of q_n times piece (s - n) of phi.
  const PiecewisePoly phi = bspline(m);
  const int w = 2 * m - 1;
  std::vector<Dyadic> bp;
  std::vector<PiecewisePoly::Coeffs> pieces;
  for (int s = 0; s <= 2 * w; ++s) bp.emplace_back(s, 1);
  for (int s = 0; s < 2 * w; ++s) {
    PiecewisePoly::Coeffs c(m, 0.0);
    for (int n = std::max(0, s - m + 1); n <= std::min(s, count - 1); ++n) {
      const auto& piece = phi.pieces()[s - n];
      for (int p = 0; p < m; ++p) c[p] += q[n] * piece[p];
    }
    pieces.push_back(std::move(c));
  }
  return {PiecewisePoly(std::move(bp), std::move(pieces)), std::move(q)};
}

std::vector<std::uint64_t> chui_wang_numerators_mod(int m, std::uint64_t prime) {
  check_order(m, kMaxOrder);
  const int order2 = 2 * m;
  std::vector<std::uint64_t> out(3 * m - 1);
  for (int n = 0; n < 3 * m - 1; ++n) {
    Int sum = 0;
    for (int l = 0; l <= m; ++l) {
      const int x = n - l + 1;
      if (x <= 0 || x >= order2) continue;
      sum += binom(m, l) * bspline_numerator(order2, x, 0);
    }
    if (n % 2 == 1) sum = -sum;
    Int r = sum % static_cast<Int>(prime);
    if (r < 0) r += prime;
    out[n] = static_cast<std::uint64_t>(r);
  }
  return out;
}

const PiecewisePoly& bspline_prototype(int m) {
  check_order(m, kMaxOrder);
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  static std::array<std::unique_ptr<PiecewisePoly>, kMaxOrder + 1> cache;
  std::call_once(flags[m], [m] { cache[m] = std::make_unique<PiecewisePoly>(bspline(m)); });
  return *cache[m];
}

const Wavelet& wavelet_prototype(int m) {
  check_order(m, kMaxOrder);
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  static std::array<std::unique_ptr<Wavelet>, kMaxOrder + 1> cache;
  std::call_once(flags[m], [m] { cache[m] = std::make_unique<Wavelet>(chui_wang_wavelet(m)); });
  return *cache[m];
}

namespace {

Atom make_atom(const SpaceParams& params, AtomKind kind, const Dyadic& k, const PiecewisePoly& proto) {
  Atom a;
  a.kind = kind;
  a.scale = params.scale;
  a.translation = k;
  a.order = params.order;
  const double amp = std::ldexp(1.0, params.scale / 2) * ((params.scale % 2) ? std::sqrt(2.0) : 1.0);
  a.shape = restrict_to(dilate_translate(proto, params.scale, k, amp), Dyadic(params.c), Dyadic(params.d));
  a.norm = std::sqrt(inner_product(a.shape, a.shape));
  return a;
}

}  // namespace

Atom make_scaling_atom(const SpaceParams& params, const Dyadic& k) {
  return make_atom(params, AtomKind::Scaling, k, bspline_prototype(params.order));
}

Atom make_wavelet_atom(const SpaceParams& params, const Dyadic& k) {
  return make_atom(params, AtomKind::Wavelet, k, wavelet_prototype(params.order).psi);
}

std::vector<Atom> basis_V(const SpaceParams& params) {
  params.validate();
  if (params.d - params.c < params.order)
    throw std::invalid_argument("basis_V: interval shorter than the spline order");
  const std::int64_t scale = std::int64_t{1} << params.scale;
  std::vector<Atom> atoms;
  for (std::int64_t k = scale * params.c - params.order + 1; k <= scale * params.d - 1; ++k)
    atoms.push_back(make_scaling_atom(params, Dyadic(k)));
  return atoms;
}

std::pair<std::int64_t, std::int64_t> basis_W_range(const SpaceParams& params) {
  const std::int64_t scale = std::int64_t{1} << params.scale;
  const int w = params.wavelet_length();
  const int ceil_z = w / 2;         // ceil((w - 1) / 2)
  const int floor_z = (w - 1) / 2;  // floor((w - 1) / 2)
  const std::int64_t first = scale * params.c - w + 1;
  const std::int64_t last = scale * params.d - 1;
  return {first + ceil_z, last - floor_z};
}

std::vector<Atom> basis_W(const SpaceParams& params) {
  params.validate_cutoff_basis();
  const auto [first, last] = basis_W_range(params);
  std::vector<Atom> atoms;
  for (std::int64_t k = first; k <= last; ++k) atoms.push_back(make_wavelet_atom(params, Dyadic(k)));
  return atoms;
}

}  // namespace splinedict
