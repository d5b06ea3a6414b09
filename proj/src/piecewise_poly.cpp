#include "splinedict/piecewise_poly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace splinedict {

namespace {

constexpr int kMaxGaussNodes = 48;

double horner(std::span<const double> c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

GaussRule compute_gauss(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// Index of the piece of p covering the half-open interval starting at x.
// Requires p's breakpoints to be a subset of the merged set being walked.
struct PieceCursor {
  const PiecewisePoly* poly;
  std::size_t idx = 0;

  // Returns piece index covering [s, e), or npos if outside support.
  std::size_t seek(const Dyadic& s) {
    const auto& bp = poly->breakpoints();
    if (bp.empty() || s < bp.front() || s >= bp.back()) return npos;
    while (idx + 1 < bp.size() && bp[idx + 1] <= s) ++idx;
    return idx;
  }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

double local_t(const PiecewisePoly& p, std::size_t i, double x) {
  const auto bp = p.breakpoints_double();
  return (x - bp[i]) / (bp[i + 1] - bp[i]);
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<Dyadic> breakpoints, std::vector<Coeffs> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breakpoints_.empty() && pieces_.empty()) return;
  if (breakpoints_.size() != pieces_.size() + 1)
    throw std::invalid_argument("PiecewisePoly: need pieces.size() + 1 breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] < breakpoints_[i + 1]))
      throw std::invalid_argument("PiecewisePoly: breakpoints must be strictly ascending");
  for (auto& c : pieces_)
    if (c.empty()) c.push_back(0.0);
  bp_double_.reserve(breakpoints_.size());
  for (const auto& b : breakpoints_) bp_double_.push_back(b.to_double());
}

bool PiecewisePoly::is_zero() const {
  for (const auto& c : pieces_)
    for (double v : c)
      if (v != 0.0) return false;
  return true;
}

std::pair<Dyadic, Dyadic> PiecewisePoly::support() const {
  if (breakpoints_.empty()) return {Dyadic{}, Dyadic{}};
  return {breakpoints_.front(), breakpoints_.back()};
}

int PiecewisePoly::max_degree() const {
  int d = 0;
  for (const auto& c : pieces_) d = std::max(d, static_cast<int>(c.size()) - 1);
  return d;
}

double PiecewisePoly::piece_value(std::size_t i, double t) const { return horner(pieces_[i], t); }

double PiecewisePoly::operator()(double x) const {
  if (pieces_.empty() || x < bp_double_.front() || x >= bp_double_.back()) return 0.0;
  const auto it = std::upper_bound(bp_double_.begin(), bp_double_.end(), x);
  const auto i = static_cast<std::size_t>(it - bp_double_.begin()) - 1;
  return piece_value(i, local_t(*this, i, x));
}

double PiecewisePoly::left_limit(double x) const {
  if (pieces_.empty() || x <= bp_double_.front() || x > bp_double_.back()) return 0.0;
  const auto it = std::lower_bound(bp_double_.begin(), bp_double_.end(), x);
  const auto i = static_cast<std::size_t>(it - bp_double_.begin()) - 1;
  return piece_value(i, local_t(*this, i, x));
}

double evaluate(const PiecewisePoly& p, double x) { return p(x); }
double evaluate_left(const PiecewisePoly& p, double x) { return p.left_limit(x); }

const GaussRule& gauss_legendre(int n) {
  static const std::array<GaussRule, kMaxGaussNodes + 1> rules = [] {
    std::array<GaussRule, kMaxGaussNodes + 1> r;
    for (int k = 1; k <= kMaxGaussNodes; ++k) r[k] = compute_gauss(k);
    return r;
  }();
  if (n < 1 || n > kMaxGaussNodes) throw std::invalid_argument("gauss_legendre: unsupported node count");
  return rules[n];
}

double inner_product(const PiecewisePoly& p, const PiecewisePoly& q) {
  if (p.piece_count() == 0 || q.piece_count() == 0) return 0.0;
  const auto [pa, pb] = p.support();
  const auto [qa, qb] = q.support();
  const Dyadic lo = std::max(pa, qa);
  const Dyadic hi = std::min(pb, qb);
  if (!(lo < hi)) return 0.0;

  const GaussRule& rule = gauss_legendre((p.max_degree() + q.max_degree()) / 2 + 2);
  const auto& bp = p.breakpoints();
  const auto& bq = q.breakpoints();
  const auto pd = p.breakpoints_double();
  const auto qd = q.breakpoints_double();

  std::size_t i = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), lo) - bp.begin()) - 1;
  std::size_t k = static_cast<std::size_t>(std::upper_bound(bq.begin(), bq.end(), lo) - bq.begin()) - 1;
  Dyadic s = lo;
  double sum = 0.0;
  while (s < hi) {
    const Dyadic e = std::min({bp[i + 1], bq[k + 1], hi});
    const double sd = s.to_double();
    const double half = 0.5 * (e.to_double() - sd);
    const double pw = pd[i + 1] - pd[i];
    const double qw = qd[k + 1] - qd[k];
    double acc = 0.0;
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const double x = sd + half * (rule.nodes[g] + 1.0);
      acc += rule.weights[g] * p.piece_value(i, (x - pd[i]) / pw) * q.piece_value(k, (x - qd[k]) / qw);
    }
    sum += half * acc;
    s = e;
    if (s == bp[i + 1]) ++i;
    if (s == bq[k + 1]) ++k;
  }
  return sum;
}

PiecewisePoly::Coeffs reparametrize(std::span<const double> coeffs, double t0, double h) {
  // Horner in polynomial arithmetic: result = result * (t0 + h u) + c_i.
  PiecewisePoly::Coeffs result{0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    PiecewisePoly::Coeffs next(result.size() + 1, 0.0);
    for (std::size_t d = 0; d < result.size(); ++d) {
      next[d] += result[d] * t0;
      next[d + 1] += result[d] * h;
    }
    next[0] += *it;
    result = std::move(next);
  }
  result.resize(std::max<std::size_t>(coeffs.size(), 1));
  return result;
}

PiecewisePoly linear_combination(std::span<const double> coeffs,
                                 std::span<const PiecewisePoly> terms) {
  if (coeffs.size() != terms.size())
    throw std::invalid_argument("linear_combination: coefficient/term count mismatch");
  if (terms.empty()) throw std::invalid_argument("linear_combination: empty input");

  std::vector<Dyadic> merged;
  std::size_t degree = 1;
  for (const auto& t : terms) {
    merged.insert(merged.end(), t.breakpoints().begin(), t.breakpoints().end());
    degree = std::max(degree, static_cast<std::size_t>(t.max_degree()) + 1);
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  if (merged.size() < 2) return {};

  std::vector<PieceCursor> cursors;
  cursors.reserve(terms.size());
  for (const auto& t : terms) cursors.push_back(PieceCursor{&t});

  std::vector<PiecewisePoly::Coeffs> pieces(merged.size() - 1, PiecewisePoly::Coeffs(degree, 0.0));
  bool any_nonzero = false;
  for (std::size_t iv = 0; iv + 1 < merged.size(); ++iv) {
    const Dyadic& s = merged[iv];
    const Dyadic& e = merged[iv + 1];
    auto& out = pieces[iv];
    for (std::size_t n = 0; n < terms.size(); ++n) {
      if (coeffs[n] == 0.0) continue;
      const std::size_t pi = cursors[n].seek(s);
      if (pi == PieceCursor::npos) continue;
      const auto& tb = terms[n].breakpoints();
      const double width = (tb[pi + 1] - tb[pi]).to_double();
      const double t0 = (s - tb[pi]).to_double() / width;
      const double h = (e - s).to_double() / width;
      const auto local = (t0 == 0.0 && h == 1.0)
                             ? terms[n].pieces()[pi]
                             : reparametrize(terms[n].pieces()[pi], t0, h);
      for (std::size_t d = 0; d < local.size(); ++d) out[d] += coeffs[n] * local[d];
    }
    for (double v : out) any_nonzero = any_nonzero || v != 0.0;
  }
  if (!any_nonzero) return {};
  return PiecewisePoly(std::move(merged), std::move(pieces));
}

PiecewisePoly restrict_to(const PiecewisePoly& p, const Dyadic& lo, const Dyadic& hi) {
  if (!(lo < hi)) throw std::invalid_argument("restrict_to: degenerate interval");
  if (p.piece_count() == 0) return {};
  const auto [a, b] = p.support();
  if (!(a < hi) || !(lo < b)) return {};
  if (lo <= a && b <= hi) return p;

  const auto& bp = p.breakpoints();
  std::vector<Dyadic> nb;
  std::vector<PiecewisePoly::Coeffs> pieces;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const Dyadic s = std::max(bp[i], lo);
    const Dyadic e = std::min(bp[i + 1], hi);
    if (!(s < e)) continue;
    const double width = (bp[i + 1] - bp[i]).to_double();
    const double t0 = (s - bp[i]).to_double() / width;
    const double h = (e - s).to_double() / width;
    if (nb.empty()) nb.push_back(s);
    nb.push_back(e);
    pieces.push_back((t0 == 0.0 && h == 1.0) ? p.pieces()[i] : reparametrize(p.pieces()[i], t0, h));
  }
  return PiecewisePoly(std::move(nb), std::move(pieces));
}

PiecewisePoly dilate_translate(const PiecewisePoly& p, int scale, const Dyadic& shift, double amplitude) {
  if (p.piece_count() == 0) return {};
  // 2^scale x - shift = b  <=>  x = (b + shift) / 2^scale
  std::vector<Dyadic> nb;
  nb.reserve(p.breakpoints().size());
  for (const auto& b : p.breakpoints()) nb.push_back((b + shift).scaled(-scale));
  std::vector<PiecewisePoly::Coeffs> pieces = p.pieces();
  if (amplitude != 1.0)
    for (auto& c : pieces)
      for (double& v : c) v *= amplitude;
  return PiecewisePoly(std::move(nb), std::move(pieces));
}

}  // namespace splinedict
