#include "splinedict/dictionary.hpp"

#include <mutex>
#include <stdexcept>

namespace splinedict {

namespace {

std::vector<Atom> lattice_atoms(const SpaceParams& params, int refine, std::int64_t left_offset, bool wavelet) {
  params.validate();
  if (refine < 0 || refine > 20) throw std::invalid_argument("refinement must be in [0, 20]");
  const std::int64_t scale = std::int64_t{1} << params.scale;
  const std::int64_t fine = std::int64_t{1} << refine;
  // Open interval (2^j c - offset, 2^j d) on Z/2^l, in units of 2^-l.
  const std::int64_t lo = (scale * params.c - left_offset) * fine + 1;
  const std::int64_t hi = scale * params.d * fine - 1;
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t u = lo; u <= hi; ++u) {
    const Dyadic k(u, refine);
    atoms.push_back(wavelet ? make_wavelet_atom(params, k) : make_scaling_atom(params, k));
  }
  return atoms;
}

}  // namespace

std::vector<Atom> dict_scaling(const SpaceParams& params, int refine) {
  return lattice_atoms(params, refine, params.order, false);
}

std::vector<Atom> dict_wavelet(const SpaceParams& params, int refine) {
  if (refine < 1) throw std::invalid_argument("dict_wavelet requires refine >= 1; use basis_W for l = 0");
  return lattice_atoms(params, refine, params.wavelet_length(), true);
}

void DictionarySpec::validate() const {
  target().validate_cutoff_basis();
  if (refine < 0) throw std::invalid_argument("refinement must be >= 0");
  if (refine > scale)
    throw std::invalid_argument("refinement " + std::to_string(refine) + " exceeds target scale " +
                                std::to_string(scale));
}

std::string DictionarySpec::describe() const {
  return "D_{" + std::to_string(scale) + "," + std::to_string(refine) + "} m=" + std::to_string(order) +
         " [" + std::to_string(c) + "," + std::to_string(d) + "]";
}

struct Dictionary::GramCache {
  std::once_flag once;
  Eigen::MatrixXd gram;
};

Dictionary::Dictionary(DictionarySpec spec, std::vector<Atom> atoms, std::vector<AtomBlock> blocks)
    : spec_(spec), atoms_(std::move(atoms)), blocks_(std::move(blocks)), cache_(std::make_shared<GramCache>()) {
  for (const auto& a : atoms_)
    if (!(a.norm > 0.0)) throw std::logic_error("Dictionary: atom with zero norm on [c, d]");
}

const Eigen::MatrixXd& Dictionary::gram() const {
  std::call_once(cache_->once, [this] { cache_->gram = kernels::gram_parallel(atoms_); });
  return cache_->gram;
}

Dictionary build_dictionary(const DictionarySpec& spec) {
  spec.validate();
  const SpaceParams base{spec.order, spec.c, spec.d, 0};
  std::vector<Atom> atoms;
  std::vector<AtomBlock> blocks;
  auto append = [&](std::vector<Atom> part, AtomKind kind, int scale) {
    blocks.push_back({kind, scale, atoms.size(), part.size()});
    for (auto& a : part) atoms.push_back(std::move(a));
  };
  if (spec.refine == 0) {
    append(basis_V(base), AtomKind::Scaling, 0);
    for (int i = 0; i < spec.scale; ++i) append(basis_W(base.at_scale(i)), AtomKind::Wavelet, i);
  } else {
    append(dict_scaling(base, spec.refine), AtomKind::Scaling, 0);
    for (int i = 0; i <= spec.scale - spec.refine; ++i)
      append(dict_wavelet(base.at_scale(i), spec.refine), AtomKind::Wavelet, i);
  }
  return Dictionary(spec, std::move(atoms), std::move(blocks));
}

Eigen::MatrixXd gram(std::span<const Atom> atoms) { return kernels::gram_parallel(atoms); }

SampledDictionary sample_atoms(std::span<const Atom> atoms, const SpaceParams& space, int finest_scale, int r) {
  if (r < finest_scale + 1)
    throw std::invalid_argument("sample: grid exponent r=" + std::to_string(r) + " must be >= j + 1 = " +
                                std::to_string(finest_scale + 1));
  SampledDictionary out;
  out.grid = SampleGrid{space.c, space.d, r};
  out.matrix = kernels::sample_parallel(atoms, out.grid);
  out.column_norms = out.matrix.colwise().norm().transpose();
  for (Eigen::Index i = 0; i < out.matrix.cols(); ++i) {
    if (!(out.column_norms[i] > 0.0)) throw std::logic_error("sample: atom vanishes on the grid");
    out.matrix.col(i) /= out.column_norms[i];
  }
  return out;
}

SampledDictionary sample(const Dictionary& dict, int r) {
  const auto& s = dict.spec();
  return sample_atoms(dict.atoms(), s.target(), s.scale, r);
}

nlohmann::json manifest(const Dictionary& dict) {
  using nlohmann::json;
  const auto& s = dict.spec();
  json j;
  j["spec"] = {{"order", s.order}, {"interval", {s.c, s.d}}, {"scale", s.scale}, {"refine", s.refine}};
  json blocks = json::array();
  for (const auto& b : dict.blocks())
    blocks.push_back({{"kind", to_string(b.kind)}, {"scale", b.scale}, {"first", b.first}, {"count", b.count}});
  j["counts"] = {{"atoms", dict.size()}, {"dim_target", s.target().dim_V()}, {"blocks", blocks}};
  json atoms = json::array();
  for (const auto& a : dict.atoms()) {
    const auto [lo, hi] = a.shape.support();
    const auto [ulo, uhi] = a.unrestricted_support();
    atoms.push_back({{"kind", to_string(a.kind)},
                     {"scale", a.scale},
                     {"translation", a.translation.to_string()},
                     {"support", {lo.to_string(), hi.to_string()}},
                     {"unrestricted_support", {ulo.to_string(), uhi.to_string()}},
                     {"norm", a.norm}});
  }
  j["atoms"] = std::move(atoms);
  return j;
}

}  // namespace splinedict
