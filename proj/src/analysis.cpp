#include "splinedict/analysis.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "splinedict/dictionary.hpp"
#include "splinedict/kernels.hpp"

namespace splinedict {

std::string CoherenceCurve::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "p,mu\n";
  for (std::size_t p = 0; p < mu.size(); ++p) out << (p + 1) << ',' << mu[p] << '\n';
  return out.str();
}

CoherenceCurve cumulative_coherence(const Eigen::MatrixXd& gram, int max_p) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("cumulative_coherence: Gram must be square");
  if (max_p < 1 || max_p >= gram.rows())
    throw std::invalid_argument("cumulative_coherence: max_p must be in [1, " + std::to_string(gram.rows() - 1) +
                                "], got " + std::to_string(max_p));
  return {kernels::coherence_parallel(gram, max_p)};
}

std::vector<double> refinement_filter(int order, int refine) {
  if (refine < 1) throw std::invalid_argument("refinement_filter: refine must be >= 1");
  std::vector<double> h = wavelet_prototype(order).q;
  const std::vector<double> p = bspline_two_scale(order);
  for (int step = 1; step < refine; ++step) {
    std::vector<double> next(2 * (h.size() - 1) + p.size(), 0.0);
    for (std::size_t n = 0; n < h.size(); ++n)
      for (std::size_t s = 0; s < p.size(); ++s) next[2 * n + s] += h[n] * p[s];
    h = std::move(next);
  }
  return h;
}

RefinementExpansion refinement_expansion(const SpaceParams& params, const Dyadic& k, int refine) {
  params.validate();
  if (refine < 1) throw std::invalid_argument("refinement_expansion: refine must be >= 1");
  if (k.log2_denominator() > refine)
    throw std::invalid_argument("refinement_expansion: translation " + k.to_string() + " not on Z/2^" +
                                std::to_string(refine));
  const std::int64_t scale = std::int64_t{1} << params.scale;
  const int w = params.wavelet_length();
  if (!(Dyadic(scale * params.c - w) < k && k < Dyadic(scale * params.d)))
    throw std::invalid_argument("refinement_expansion: translation " + k.to_string() +
                                " outside (2^j c - w, 2^j d)");

  const std::vector<double> h = refinement_filter(params.order, refine);
  const int fine_scale = params.scale + refine;
  const std::int64_t fine = std::int64_t{1} << fine_scale;
  const std::int64_t base = k.scaled_to_integer(refine);
  const double amp = 1.0 / std::sqrt(std::ldexp(1.0, refine));

  RefinementExpansion e;
  e.scale = params.scale;
  e.refine = refine;
  e.translation = k;
  e.n_lo = std::max(base, fine * params.c - params.order + 1);
  e.n_hi = std::min(base + static_cast<std::int64_t>(h.size()) - 1, fine * params.d - 1);
  for (std::int64_t n = e.n_lo; n <= e.n_hi; ++n) e.g.push_back(amp * h[static_cast<std::size_t>(n - base)]);
  return e;
}

Eigen::MatrixXd express_all_fine_scaling(const SpaceParams& params, int refine, std::span<const Atom> family) {
  params.validate();
  const int fine_scale = params.scale + refine;
  const std::int64_t fine = std::int64_t{1} << fine_scale;
  const std::int64_t n_lo = fine * params.c - params.order + 1;
  const std::int64_t n_hi = fine * params.d - 1;
  const std::int64_t inner_start = fine * params.c;

  std::map<Dyadic, Eigen::Index> column;
  for (std::size_t i = 0; i < family.size(); ++i)
    if (family[i].kind == AtomKind::Wavelet && family[i].scale == params.scale)
      column.emplace(family[i].translation, static_cast<Eigen::Index>(i));
  auto col_of = [&](const Dyadic& k) {
    const auto it = column.find(k);
    if (it == column.end())
      throw std::invalid_argument("express_fine_scaling: pivot wavelet k=" + k.to_string() + " not in family");
    return it->second;
  };

  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n_hi - n_lo + 1, static_cast<Eigen::Index>(family.size()));
  auto row = [&](std::int64_t n) { return rows.row(n - n_lo); };

  // Inner and right-boundary functions: pivot k = n / 2^l, eliminate rightward.
  for (std::int64_t n = n_hi; n >= inner_start; --n) {
    const Dyadic k(n, refine);
    const auto e = refinement_expansion(params, k, refine);
    const double pivot = e.coefficient(n);
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(rows.cols());
    r[col_of(k)] = 1.0;
    for (std::int64_t i = n + 1; i <= e.n_hi; ++i) r -= e.coefficient(i) * row(i);
    row(n) = r / pivot;
  }
  // Left-boundary functions: pivot k = (n + m) / 2^l - w, eliminate leftward.
  for (std::int64_t n = n_lo; n < inner_start; ++n) {
    const Dyadic k = Dyadic(n + params.order, refine) - Dyadic(params.wavelet_length());
    const auto e = refinement_expansion(params, k, refine);
    const double pivot = e.coefficient(n);
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(rows.cols());
    r[col_of(k)] = 1.0;
    for (std::int64_t i = e.n_lo; i < n; ++i) r -= e.coefficient(i) * row(i);
    row(n) = r / pivot;
  }
  return rows;
}

std::vector<double> express_fine_scaling(std::int64_t n, const SpaceParams& params, int refine,
                                         std::span<const Atom> family) {
  const std::int64_t fine = std::int64_t{1} << (params.scale + refine);
  const std::int64_t n_lo = fine * params.c - params.order + 1;
  const std::int64_t n_hi = fine * params.d - 1;
  if (n < n_lo || n > n_hi)
    throw std::invalid_argument("express_fine_scaling: n=" + std::to_string(n) + " outside [" +
                                std::to_string(n_lo) + "," + std::to_string(n_hi) + "]");
  const Eigen::MatrixXd all = express_all_fine_scaling(params, refine, family);
  const Eigen::RowVectorXd r = all.row(n - n_lo);
  return {r.data(), r.data() + r.size()};
}

double fine_scaling_reconstruction_error(std::int64_t n, const SpaceParams& params, int refine,
                                         std::span<const Atom> family, std::span<const double> coeffs) {
  std::vector<PiecewisePoly> terms;
  std::vector<double> c;
  const Atom target = make_scaling_atom(params.at_scale(params.scale + refine), Dyadic(n));
  terms.push_back(target.shape);
  c.push_back(-1.0);
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    terms.push_back(family[i].shape);
    c.push_back(coeffs[i]);
  }
  const PiecewisePoly diff = linear_combination(c, terms);
  return std::sqrt(std::max(0.0, inner_product(diff, diff))) / target.norm;
}

int numerical_rank(const Eigen::MatrixXd& gram, double cutoff) {
  if (gram.size() == 0) return 0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<int>((ev.array() > cutoff * top).count());
}

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  std::uint64_t v = static_cast<std::uint64_t>(r & kPrime) + static_cast<std::uint64_t>(r >> 61);
  return v >= kPrime ? v - kPrime : v;
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t v = a + b;
  return v >= kPrime ? v - kPrime : v;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, b = mulmod(b, b))
    if (e & 1) r = mulmod(r, b);
  return r;
}

// Convolution with the integer two-scale filter binom(m, s), upsampled by 2.
std::vector<std::uint64_t> refine_mod(const std::vector<std::uint64_t>& h, const std::vector<std::uint64_t>& p) {
  std::vector<std::uint64_t> next(2 * (h.size() - 1) + p.size(), 0);
  for (std::size_t n = 0; n < h.size(); ++n)
    for (std::size_t s = 0; s < p.size(); ++s) next[2 * n + s] = addmod(next[2 * n + s], mulmod(h[n], p[s]));
  return next;
}

}  // namespace

int exact_rank_lower_bound(std::span<const Atom> atoms, const SpaceParams& target) {
  target.validate();
  const int m = target.order;
  const std::int64_t fine = std::int64_t{1} << target.scale;
  const std::int64_t n_lo = fine * target.c - m + 1;
  const std::int64_t n_hi = fine * target.d - 1;
  const auto dim = static_cast<std::size_t>(n_hi - n_lo + 1);

  std::vector<std::uint64_t> p(m + 1);
  for (int s = 0; s <= m; ++s) {
    std::uint64_t b = 1;
    for (int i = 1; i <= s; ++i) b = b * (m - s + i) / i;
    p[s] = b % kPrime;
  }
  const std::vector<std::uint64_t> q = chui_wang_numerators_mod(m, kPrime);

  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (a.order != m) throw std::invalid_argument("exact_rank_lower_bound: mixed orders");
    const int depth = target.scale - a.scale;
    if (depth < 0 || (a.kind == AtomKind::Wavelet && depth < 1) || a.translation.log2_denominator() > depth)
      throw std::invalid_argument("exact_rank_lower_bound: atom not in V_" + std::to_string(target.scale));
    std::vector<std::uint64_t> h = a.kind == AtomKind::Scaling ? std::vector<std::uint64_t>{1} : q;
    for (int t = a.kind == AtomKind::Scaling ? 0 : 1; t < depth; ++t) h = refine_mod(h, p);
    const std::int64_t base = a.translation.scaled_to_integer(depth);
    std::vector<std::uint64_t> row(dim, 0);
    for (std::size_t i = 0; i < h.size(); ++i) {
      const std::int64_t n = base + static_cast<std::int64_t>(i);
      if (n >= n_lo && n <= n_hi) row[static_cast<std::size_t>(n - n_lo)] = h[i];
    }
    rows.push_back(std::move(row));
  }

  int rank = 0;
  for (std::size_t col = 0; col < dim && static_cast<std::size_t>(rank) < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    const std::uint64_t inv = powmod(rows[rank][col], kPrime - 2);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const std::uint64_t f = kPrime - mulmod(rows[r][col], inv);
      for (std::size_t k = col; k < dim; ++k) rows[r][k] = addmod(rows[r][k], mulmod(f, rows[rank][k]));
    }
    ++rank;
  }
  return rank;
}

SpanReport verify_span(std::span<const Atom> atoms, const SpaceParams& target) {
  target.validate();
  SpanReport rep;
  rep.atom_count = atoms.size();
  rep.expected_dim = target.dim_V();

  rep.inclusion_ok = true;
  for (const auto& a : atoms) {
    if (a.shape.max_degree() > target.order - 1) rep.inclusion_ok = false;
    for (const auto& b : a.shape.breakpoints())
      if (b.log2_denominator() > target.scale) rep.inclusion_ok = false;
  }

  if (rep.inclusion_ok) rep.exact_rank = exact_rank_lower_bound(atoms, target);
  rep.gram_rank = numerical_rank(gram(atoms), kRankCutoff);

  // Sampled cross-check with an orthogonal projector (thin SVD). Gram rank
  // cutoff on eigenvalues corresponds to sqrt(cutoff) on singular values.
  const int r = target.scale + 2;
  const SampledDictionary sd = sample_atoms(atoms, target, target.scale, r);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(sd.matrix, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  rep.sampled_rank = static_cast<int>((sv.array() > std::sqrt(kRankCutoff) * smax).count());
  const Eigen::MatrixXd basis = svd.matrixU().leftCols(rep.sampled_rank);

  const std::vector<Atom> fine = dict_scaling(target, 0);
  const SampledDictionary fs = sample_atoms(fine, target, target.scale, r);
  const Eigen::MatrixXd resid = fs.matrix - basis * (basis.transpose() * fs.matrix);
  rep.max_projection_residual = resid.colwise().norm().maxCoeff();

  rep.pass = rep.inclusion_ok && rep.gram_rank == rep.expected_dim && rep.sampled_rank == rep.expected_dim &&
             rep.max_projection_residual <= 1e-8;
  return rep;
}

}  // namespace splinedict
