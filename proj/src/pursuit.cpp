#include "splinedict/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "splinedict/kernels.hpp"

namespace splinedict {

namespace {

kernels::Candidate best_candidate(const PursuitConfig& cfg, std::span<const double> numer,
                                  std::span<const double> denom2, std::span<const char> excluded) {
  return cfg.parallel ? kernels::best_candidate_parallel(numer, denom2, excluded, cfg.in_span_threshold)
                      : kernels::best_candidate_serial(numer, denom2, excluded, cfg.in_span_threshold);
}

double relative_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(b.norm(), std::numeric_limits<double>::min());
  return (a - b).norm() / scale;
}

// Everything swap/backward need about the current selection.
struct SelectionState {
  OrthogonalProjector proj;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd residual;
  double residual_norm;
  Eigen::MatrixXd r_inverse;  // rows are the dual-direction coordinates z_s

  SelectionState(const Eigen::MatrixXd& A, std::span<const std::size_t> idx, const Eigen::VectorXd& f,
                 double min_norm = OrthogonalProjector::kDefaultMinNorm,
                 double max_condition = OrthogonalProjector::kNoConditionLimit)
      : proj(A, idx, min_norm, max_condition),
        coeffs(proj.coefficients(f)),
        residual(proj.residual(f)),
        residual_norm(residual.norm()),
        r_inverse(proj.r_inverse()) {}
};

AtomicDecomposition with_state(AtomicDecomposition dec, std::vector<std::size_t> idx, const SelectionState& st) {
  dec.indices = std::move(idx);
  dec.coefficients = st.coeffs;
  dec.residual_norm = st.residual_norm;
  return dec;
}

}  // namespace

void PursuitConfig::validate(std::size_t dictionary_size) const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("PursuitConfig: tolerance must be > 0");
  if (swap_margin > 0.0 && !std::isfinite(swap_margin)) throw std::invalid_argument("PursuitConfig: bad margin");
  if (!(in_span_threshold >= 0.0)) throw std::invalid_argument("PursuitConfig: in_span_threshold must be >= 0");
  if (!(max_condition > 1.0)) throw std::invalid_argument("PursuitConfig: max_condition must be > 1");
  if (max_atoms > dictionary_size)
    throw std::invalid_argument("PursuitConfig: max_atoms exceeds dictionary size");
}

double PursuitConfig::target_residual(double signal_norm) const {
  return mode == ToleranceMode::Relative ? tolerance * signal_norm : tolerance;
}

double PursuitConfig::margin(double signal_norm) const {
  return swap_margin < 0.0 ? 1e-12 * signal_norm : swap_margin;
}

OrthogonalProjector::OrthogonalProjector(Eigen::Index rows, std::size_t capacity, double min_norm,
                                         double max_condition)
    : q_(rows, static_cast<Eigen::Index>(capacity)),
      r_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(capacity), static_cast<Eigen::Index>(capacity))),
      rinv_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(capacity), static_cast<Eigen::Index>(capacity))),
      min_norm_(min_norm),
      max_condition_(max_condition) {}

OrthogonalProjector::OrthogonalProjector(const Eigen::MatrixXd& A, std::span<const std::size_t> indices,
                                         double min_norm, double max_condition)
    : OrthogonalProjector(A.rows(), indices.size(), min_norm, max_condition) {
  for (std::size_t i : indices)
    if (!append(A.col(static_cast<Eigen::Index>(i))))
      throw std::runtime_error("OrthogonalProjector: selected columns are linearly dependent");
}

bool OrthogonalProjector::append(const Eigen::Ref<const Eigen::VectorXd>& column) {
  if (size_ == static_cast<std::size_t>(q_.cols())) {
    const Eigen::Index cap = std::max<Eigen::Index>(8, 2 * q_.cols());
    q_.conservativeResize(Eigen::NoChange, cap);
    auto grow = [cap](Eigen::MatrixXd& m) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(cap, cap);
      g.topLeftCorner(m.rows(), m.cols()) = m;
      m = std::move(g);
    };
    grow(r_);
    grow(rinv_);
  }
  const auto n = static_cast<Eigen::Index>(size_);
  const auto q = q_.leftCols(n);
  Eigen::VectorXd v = column;
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(n);
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd h = q.transpose() * v;
    v -= q * h;
    proj += h;
  }
  const double norm = v.norm();
  const double cn2 = column.squaredNorm();
  if (!(norm > min_norm_ * std::max(1.0, std::sqrt(cn2)))) return false;

  // New last column of R^-1 is [-R^-1 proj; 1] / norm.
  const Eigen::VectorXd u = r_inverse().triangularView<Eigen::Upper>() * proj;
  const double added = (u.squaredNorm() + 1.0) / (norm * norm);
  if (std::isfinite(max_condition_) &&
      !((column_norm2_ + cn2) * (inverse_norm2_ + added) <= max_condition_ * max_condition_))
    return false;

  last_ = v / norm;
  q_.col(n) = last_;
  r_.col(n).head(n) = proj;
  r_(n, n) = norm;
  rinv_.col(n).head(n) = -u / norm;
  rinv_(n, n) = 1.0 / norm;
  column_norm2_ += cn2;
  inverse_norm2_ += added;
  ++size_;
  return true;
}

Eigen::VectorXd OrthogonalProjector::coefficients(const Eigen::VectorXd& f) const {
  const Eigen::VectorXd qf = basis().transpose() * f;
  return r_factor().triangularView<Eigen::Upper>().solve(qf);
}

Eigen::VectorXd OrthogonalProjector::residual(const Eigen::VectorXd& f) const {
  Eigen::VectorXd r = f;
  for (int pass = 0; pass < 2; ++pass) r -= basis() * (basis().transpose() * r);
  return r;
}

Eigen::VectorXd least_squares_coefficients(const Eigen::MatrixXd& A, std::span<const std::size_t> indices,
                                           const Eigen::VectorXd& f) {
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t n = 0; n < indices.size(); ++n) sub.col(static_cast<Eigen::Index>(n)) = A.col(static_cast<Eigen::Index>(indices[n]));
  return sub.colPivHouseholderQr().solve(f);
}

double residual_correlation(const Eigen::MatrixXd& A, const Eigen::VectorXd& f, const AtomicDecomposition& dec) {
  Eigen::VectorXd r = f;
  for (std::size_t n = 0; n < dec.indices.size(); ++n)
    r -= dec.coefficients[static_cast<Eigen::Index>(n)] * A.col(static_cast<Eigen::Index>(dec.indices[n]));
  const double fn = f.norm();
  if (fn == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i : dec.indices) worst = std::max(worst, std::abs(A.col(static_cast<Eigen::Index>(i)).dot(r)));
  return worst / fn;
}

AtomicDecomposition forward_select(const Eigen::VectorXd& f, const Eigen::MatrixXd& A, const PursuitConfig& cfg) {
  if (A.cols() == 0) throw std::invalid_argument("forward_select: empty dictionary");
  if (f.size() != A.rows()) throw std::invalid_argument("forward_select: signal length does not match the grid");
  cfg.validate(static_cast<std::size_t>(A.cols()));

  AtomicDecomposition dec;
  dec.signal_norm = f.norm();
  dec.coefficients = Eigen::VectorXd(0);
  const double target = cfg.target_residual(dec.signal_norm);
  const std::size_t cap = cfg.max_atoms ? cfg.max_atoms : static_cast<std::size_t>(std::min(A.rows(), A.cols()));

  Eigen::VectorXd r = f;
  double res = dec.signal_norm;
  dec.residual_norm = res;
  if (res <= target || res == 0.0) {
    dec.converged = true;
    dec.stages.push_back({"forward", 0, res});
    return dec;
  }

  // The deflated B drifts with every step, so the in-span test that decides
  // acceptance uses the reorthogonalised remainder inside append().
  OrthogonalProjector proj(A.rows(), std::min<std::size_t>(cap, 64), cfg.in_span_threshold, cfg.max_condition);
  Eigen::MatrixXd B = A;  // components orthogonal to the selected span
  std::vector<char> excluded(static_cast<std::size_t>(A.cols()), 0);
  Eigen::VectorXd numer, denom2;

  while (res > target && dec.indices.size() < cap) {
    numer.noalias() = B.transpose() * r;
    denom2 = B.colwise().squaredNorm().transpose();
    const auto cand = best_candidate(cfg, {numer.data(), static_cast<std::size_t>(numer.size())},
                                     {denom2.data(), static_cast<std::size_t>(denom2.size())}, excluded);
    if (cand.index < 0) break;
    if (!proj.append(A.col(cand.index))) {
      excluded[static_cast<std::size_t>(cand.index)] = 1;
      continue;
    }
    excluded[static_cast<std::size_t>(cand.index)] = 1;
    dec.indices.push_back(static_cast<std::size_t>(cand.index));
    if (cfg.parallel)
      kernels::deflate_parallel(B, proj.last_direction(), excluded);
    else
      kernels::deflate_serial(B, proj.last_direction(), excluded);
    r = proj.residual(f);
    res = r.norm();
    dec.forward_history.push_back(res);
    if (dec.indices.size() % 10 == 0) {
      const double gap = relative_gap(proj.coefficients(f), least_squares_coefficients(A, dec.indices, f));
      dec.projection_check = std::max(dec.projection_check, gap);
    }
  }
  dec.coefficients = proj.coefficients(f);
  dec.residual_norm = res;
  dec.converged = res <= target;
  dec.stages.push_back({"forward", dec.indices.size(), res});
  return dec;
}

AtomicDecomposition swap_refine(const AtomicDecomposition& input, const Eigen::VectorXd& f,
                                const Eigen::MatrixXd& A, const PursuitConfig& cfg) {
  AtomicDecomposition dec = input;
  if (dec.indices.empty()) return dec;
  const double margin = cfg.margin(dec.signal_norm);
  const auto K = A.cols();
  std::vector<std::size_t> idx = dec.indices;
  auto st = std::make_unique<SelectionState>(A, idx, f);

  Eigen::MatrixXd C, Bmat;
  Eigen::VectorXd base_denom2, base_numer, qf;
  auto refresh = [&] {
    const auto Q = st->proj.basis();
    C.noalias() = Q.transpose() * A;
    Bmat = A;
    Bmat.noalias() -= Q * C;
    base_denom2 = Bmat.colwise().squaredNorm().transpose();
    base_numer.noalias() = Bmat.transpose() * st->residual;
    qf.noalias() = Q.transpose() * f;
  };
  refresh();

  std::vector<char> excluded(static_cast<std::size_t>(K), 0);
  Eigen::VectorXd numer(K), denom2(K);
  for (std::size_t pass = 0; pass < cfg.max_swap_passes; ++pass) {
    bool changed = false;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      const double res = st->residual_norm;
      if (res <= margin) break;
      const Eigen::VectorXd z = st->r_inverse.row(static_cast<Eigen::Index>(s)).transpose();
      const double zn = z.norm();
      const Eigen::VectorXd ua = (C.transpose() * z) / zn;  // <u_s, a_i>
      const double uf = z.dot(qf) / zn;                     // <u_s, f>
      numer = base_numer + uf * ua;
      denom2 = base_denom2 + ua.cwiseAbs2();
      std::fill(excluded.begin(), excluded.end(), 0);
      for (std::size_t i : idx) excluded[i] = 1;
      const auto cand = best_candidate(cfg, {numer.data(), static_cast<std::size_t>(K)},
                                       {denom2.data(), static_cast<std::size_t>(K)}, excluded);
      if (cand.index < 0) continue;
      const double predicted2 = res * res + uf * uf - cand.score * cand.score;
      const double want = res - margin;
      if (!(predicted2 < want * want)) continue;

      std::vector<std::size_t> trial = idx;
      trial[s] = static_cast<std::size_t>(cand.index);
      std::unique_ptr<SelectionState> next;
      try {
        next = std::make_unique<SelectionState>(A, trial, f, cfg.in_span_threshold, cfg.max_condition);
      } catch (const std::runtime_error&) {
        continue;
      }
      if (!(next->residual_norm < want)) continue;
      idx = std::move(trial);
      st = std::move(next);
      refresh();
      dec.swap_history.push_back(st->residual_norm);
      ++dec.swaps_accepted;
      changed = true;
    }
    if (!changed) break;
  }
  dec = with_state(std::move(dec), std::move(idx), *st);
  dec.converged = dec.residual_norm <= cfg.target_residual(dec.signal_norm);
  dec.stages.push_back({"swap", dec.indices.size(), dec.residual_norm});
  return dec;
}

AtomicDecomposition backward_prune(const AtomicDecomposition& input, const Eigen::VectorXd& f,
                                   const Eigen::MatrixXd& A, double budget) {
  AtomicDecomposition dec = input;
  std::vector<std::size_t> idx = dec.indices;
  if (!idx.empty()) {
    auto st = std::make_unique<SelectionState>(A, idx, f);
    while (!idx.empty()) {
      // Removing s adds c_s^2 / ||z_s||^2 to the squared residual.
      std::size_t best = 0;
      double best_inc = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < idx.size(); ++s) {
        const double zn2 = st->r_inverse.row(static_cast<Eigen::Index>(s)).squaredNorm();
        const double c = st->coeffs[static_cast<Eigen::Index>(s)];
        const double inc = c * c / zn2;
        if (inc < best_inc) {
          best_inc = inc;
          best = s;
        }
      }
      const double res = st->residual_norm;
      if (!(std::sqrt(res * res + best_inc) <= budget)) break;
      std::vector<std::size_t> trial = idx;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(best));
      auto next = std::make_unique<SelectionState>(A, trial, f);
      if (!(next->residual_norm <= budget)) break;
      idx = std::move(trial);
      st = std::move(next);
      dec.backward_history.push_back(st->residual_norm);
    }
    dec = with_state(std::move(dec), std::move(idx), *st);
    if (!dec.indices.empty())
      dec.projection_check = std::max(
          dec.projection_check, relative_gap(st->coeffs, least_squares_coefficients(A, dec.indices, f)));
  }
  dec.converged = dec.residual_norm <= budget;
  dec.stages.push_back({"backward", dec.indices.size(), dec.residual_norm});
  return dec;
}

AtomicDecomposition approximate(const Eigen::VectorXd& f, const Eigen::MatrixXd& A, const PursuitConfig& cfg) {
  AtomicDecomposition dec = forward_select(f, A, cfg);
  if (cfg.swap_enabled) dec = swap_refine(dec, f, A, cfg);
  if (cfg.backward_enabled) dec = backward_prune(dec, f, A, cfg.target_residual(dec.signal_norm));
  dec.converged = dec.residual_norm <= cfg.target_residual(dec.signal_norm);
  return dec;
}

}  // namespace splinedict
