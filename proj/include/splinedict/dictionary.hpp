#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "splinedict/kernels.hpp"
#include "splinedict/spline_mra.hpp"

namespace splinedict {

/// Redundant B-spline family V_{j,l}: k in (2^j c - m, 2^j d) on the lattice Z/2^l.
std::vector<Atom> dict_scaling(const SpaceParams& params, int refine);

/// Redundant wavelet family W_{j,l} (l >= 1): every psi_{j,k}, k in Z/2^l,
/// whose support meets (c, d), i.e. k in (2^j c - w, 2^j d).
std::vector<Atom> dict_wavelet(const SpaceParams& params, int refine);

/// D_{j,l}: spans V_j on [c, d].
struct DictionarySpec {
  int order = 4;
  std::int64_t c = 0;
  std::int64_t d = 8;
  int scale = 6;
  int refine = 0;

  SpaceParams target() const { return {order, c, d, scale}; }
  void validate() const;
  std::string describe() const;
};

/// Contiguous run of atoms from one subspace family.
struct AtomBlock {
  AtomKind kind;
  int scale;
  std::size_t first;
  std::size_t count;
};

class Dictionary {
public:
  Dictionary(DictionarySpec spec, std::vector<Atom> atoms, std::vector<AtomBlock> blocks);

  const DictionarySpec& spec() const { return spec_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<AtomBlock>& blocks() const { return blocks_; }
  std::size_t size() const { return atoms_.size(); }

  /// Exact L2 Gram of the unit-normalised atoms; computed once, then shared.
  const Eigen::MatrixXd& gram() const;

private:
  struct GramCache;

  DictionarySpec spec_;
  std::vector<Atom> atoms_;
  std::vector<AtomBlock> blocks_;
  std::shared_ptr<GramCache> cache_;
};

/// l = 0: V_{0,0} U W_{0,0} U ... U W_{j-1,0}.
/// l >= 1: V_{0,l} U W_{0,l} U ... U W_{j-l,l}.
/// Ordered coarse to fine, translation ascending. Throws for l > j.
Dictionary build_dictionary(const DictionarySpec& spec);

/// Exact Gram of unit-normalised atoms (parallel kernel).
Eigen::MatrixXd gram(std::span<const Atom> atoms);
inline const Eigen::MatrixXd& gram(const Dictionary& dict) { return dict.gram(); }

/// Atoms sampled on the closed grid with step 2^-r, columns scaled to unit
/// discrete l2 norm. `column_norms` holds the raw discrete norms.
struct SampledDictionary {
  SampleGrid grid;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd column_norms;
};

/// Requires r >= j + 1 where j is the dictionary's target scale.
SampledDictionary sample(const Dictionary& dict, int r);
/// Same for a bare atom list whose finest knot spacing is 2^-finest_scale.
SampledDictionary sample_atoms(std::span<const Atom> atoms, const SpaceParams& space, int finest_scale, int r);

/// Manifest: spec, counts and per-atom kind/scale/translation/support.
nlohmann::json manifest(const Dictionary& dict);

}  // namespace splinedict
