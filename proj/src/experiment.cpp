#include "splinedict/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "splinedict/signals.hpp"

namespace splinedict {

using nlohmann::json;

SignalSpec SignalSpec::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("signal: empty specification");
  if (text == "chirp") return {Source::Chirp, {}};
  return {Source::File, text};
}

PreparedExperiment prepare_experiment(const SignalSpec& signal, const DictionarySpec& spec, int grid_exponent) {
  const int r = grid_exponent < 0 ? spec.scale + 1 : grid_exponent;
  Dictionary dict = build_dictionary(spec);
  SampledDictionary sampled = sample(dict, r);
  Eigen::VectorXd f;
  std::size_t original = static_cast<std::size_t>(sampled.grid.size());
  if (signal.source == SignalSpec::Source::Chirp) {
    f = gen_chirp(sampled.grid);
  } else {
    LoadedSignal s = load_signal(signal.path, sampled.grid);
    f = std::move(s.samples);
    original = s.original_length;
  }
  return {signal, spec, std::move(dict), std::move(sampled), std::move(f), original};
}

ExperimentReport run_prepared(const PreparedExperiment& prep, const PursuitConfig& cfg, int coherence_max_p) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.signal = prep.signal;
  rep.dict_spec = prep.dict_spec;
  rep.config = cfg;
  rep.grid_exponent = prep.sampled.grid.exponent;
  rep.samples = static_cast<std::size_t>(prep.f.size());
  rep.original_length = prep.original_length;
  rep.dictionary_size = prep.dict.size();
  rep.decomposition = approximate(prep.f, prep.sampled.matrix, cfg);
  if (coherence_max_p > 0) rep.coherence = cumulative_coherence(prep.dict.gram(), coherence_max_p);
  rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

ExperimentReport run_experiment(const SignalSpec& signal, const DictionarySpec& spec, const PursuitConfig& cfg,
                                const ExperimentOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const PreparedExperiment prep = prepare_experiment(signal, spec, opts.grid_exponent);
  ExperimentReport rep = run_prepared(prep, cfg, opts.coherence_max_p);
  rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

json ExperimentReport::to_json(const Dictionary& dict, const SampledDictionary& sampled) const {
  const auto& dec = decomposition;
  json j;
  j["version"] = kVersion;
  j["signal"] = {{"source", signal.source == SignalSpec::Source::Chirp ? "chirp" : "file"},
                 {"path", signal.path},
                 {"interval", {dict_spec.c, dict_spec.d}},
                 {"samples", samples},
                 {"original_length", original_length}};
  j["dictionary"] = {{"order", dict_spec.order},
                     {"interval", {dict_spec.c, dict_spec.d}},
                     {"scale", dict_spec.scale},
                     {"refine", dict_spec.refine},
                     {"atoms", dictionary_size},
                     {"dim_target", dict_spec.target().dim_V()}};
  j["grid_exponent"] = grid_exponent;
  j["config"] = {{"tolerance", config.tolerance},
                 {"tolerance_mode", config.mode == ToleranceMode::Relative ? "relative" : "absolute"},
                 {"max_atoms", config.max_atoms},
                 {"swap_enabled", config.swap_enabled},
                 {"backward_enabled", config.backward_enabled},
                 {"swap_margin", config.margin(dec.signal_norm)},
                 {"in_span_threshold", config.in_span_threshold},
                 {"max_condition", config.max_condition}};
  j["selection"] = "optimized-orthogonal";
  j["inner_products"] = "discrete-l2 (sampled, unit columns)";

  json stages = json::array();
  for (const auto& s : dec.stages)
    stages.push_back({{"stage", s.stage},
                      {"atoms", s.atoms},
                      {"residual", s.residual},
                      {"relative_residual", dec.signal_norm > 0 ? s.residual / dec.signal_norm : 0.0}});
  j["stages"] = std::move(stages);
  j["N"] = dec.size();
  j["signal_norm"] = dec.signal_norm;
  j["residual_norm"] = dec.residual_norm;
  j["relative_residual"] = dec.signal_norm > 0 ? dec.residual_norm / dec.signal_norm : 0.0;
  j["converged"] = dec.converged;
  j["swaps_accepted"] = dec.swaps_accepted;
  j["projection_check"] = dec.projection_check;
  j["residual_curve"] = {{"forward", dec.forward_history},
                         {"swap", dec.swap_history},
                         {"backward", dec.backward_history}};

  json atoms = json::array();
  for (std::size_t n = 0; n < dec.indices.size(); ++n) {
    const std::size_t i = dec.indices[n];
    const Atom& a = dict.atoms()[i];
    atoms.push_back({{"index", i},
                     {"kind", to_string(a.kind)},
                     {"scale", a.scale},
                     {"translation", a.translation.to_string()},
                     {"coefficient", dec.coefficients[static_cast<Eigen::Index>(n)]},
                     {"column_norm", sampled.column_norms[static_cast<Eigen::Index>(i)]}});
  }
  j["atoms"] = std::move(atoms);
  if (coherence) {
    j["coherence"] = {{"inner_products", "exact-L2 (unit atoms)"},
                      {"max_p", coherence->max_p()},
                      {"mu_1", (*coherence)(1)},
                      {"mu_max_p", (*coherence)(coherence->max_p())}};
  }
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

std::string decomposition_csv(const AtomicDecomposition& dec, const Dictionary& dict, const SampledDictionary& sampled) {
  std::ostringstream out;
  out.precision(17);
  out << "position,index,kind,scale,translation,coefficient,column_norm\n";
  for (std::size_t n = 0; n < dec.indices.size(); ++n) {
    const std::size_t i = dec.indices[n];
    const Atom& a = dict.atoms()[i];
    out << n << ',' << i << ',' << to_string(a.kind) << ',' << a.scale << ',' << a.translation.to_string() << ','
        << dec.coefficients[static_cast<Eigen::Index>(n)] << ',' << sampled.column_norms[static_cast<Eigen::Index>(i)]
        << '\n';
  }
  return out.str();
}

Eigen::VectorXd resynthesize(const json& report, const SampledDictionary& sampled) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sampled.matrix.rows());
  for (const auto& a : report.at("atoms")) {
    const auto i = a.at("index").get<Eigen::Index>();
    if (i < 0 || i >= sampled.matrix.cols()) throw std::out_of_range("resynthesize: atom index out of range");
    out += a.at("coefficient").get<double>() * sampled.matrix.col(i);
  }
  return out;
}

std::vector<double> tolerance_sweep(double from, double to, int steps, bool logarithmic) {
  if (steps < 1) throw std::invalid_argument("tolerance_sweep: steps must be >= 1");
  if (!(from > 0.0) || !(to > 0.0)) throw std::invalid_argument("tolerance_sweep: tolerances must be > 0");
  std::vector<double> out;
  if (steps == 1) return {from};
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    out.push_back(logarithmic ? std::exp(std::log(from) + t * (std::log(to) - std::log(from)))
                              : from + t * (to - from));
  }
  out.front() = from;
  out.back() = to;
  return out;
}

}  // namespace splinedict
