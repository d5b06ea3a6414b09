#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "splinedict/analysis.hpp"
#include "splinedict/dictionary.hpp"
#include "splinedict/pursuit.hpp"

namespace splinedict {

inline constexpr const char* kVersion = "splinedict 0.1.0";

struct SignalSpec {
  enum class Source { Chirp, File };
  Source source = Source::Chirp;
  std::string path;

  static SignalSpec parse(const std::string& text);  // "chirp" or a file path
  std::string describe() const { return source == Source::Chirp ? "chirp" : path; }
};

struct ExperimentOptions {
  /// Grid step 2^-r; negative means j + 1.
  int grid_exponent = -1;
  /// > 0: also report mu(1..P) from the exact Gram.
  int coherence_max_p = 0;
};

/// Dictionary, its sampled matrix and the signal on the same grid.
struct PreparedExperiment {
  SignalSpec signal;
  DictionarySpec dict_spec;
  Dictionary dict;
  SampledDictionary sampled;
  Eigen::VectorXd f;
  std::size_t original_length = 0;
};

PreparedExperiment prepare_experiment(const SignalSpec& signal, const DictionarySpec& spec, int grid_exponent = -1);

struct ExperimentReport {
  SignalSpec signal;
  DictionarySpec dict_spec;
  PursuitConfig config;
  int grid_exponent = 0;
  std::size_t samples = 0;
  std::size_t original_length = 0;
  std::size_t dictionary_size = 0;
  AtomicDecomposition decomposition;
  std::optional<CoherenceCurve> coherence;
  double wall_clock_seconds = 0.0;

  /// Full report; `dict`/`sampled` supply per-atom labels and column norms.
  nlohmann::json to_json(const Dictionary& dict, const SampledDictionary& sampled) const;
};

ExperimentReport run_prepared(const PreparedExperiment& prep, const PursuitConfig& cfg, int coherence_max_p = 0);
ExperimentReport run_experiment(const SignalSpec& signal, const DictionarySpec& spec, const PursuitConfig& cfg,
                                const ExperimentOptions& opts = {});

/// One CSV row per selected atom: position,index,kind,scale,translation,coefficient,column_norm.
std::string decomposition_csv(const AtomicDecomposition& dec, const Dictionary& dict, const SampledDictionary& sampled);

/// f^N rebuilt from an exported report (atom indices and coefficients).
Eigen::VectorXd resynthesize(const nlohmann::json& report, const SampledDictionary& sampled);

/// Log-spaced (or linear) tolerance sweep.
std::vector<double> tolerance_sweep(double from, double to, int steps, bool logarithmic = true);

}  // namespace splinedict
