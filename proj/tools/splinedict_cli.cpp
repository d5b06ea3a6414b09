// Command-line runner: dictionary manifests, coherence curves, span checks,
// pursuit experiments and tolerance sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splinedict/analysis.hpp"
#include "splinedict/dictionary.hpp"
#include "splinedict/experiment.hpp"

using namespace splinedict;

namespace {

struct DictFlags {
  int order = 4;
  std::vector<std::int64_t> interval{0, 8};
  int scale = 6;
  int refine = 0;

  void attach(CLI::App* app) {
    app->add_option("--order", order, "Spline order m")->capture_default_str();
    app->add_option("--interval", interval, "Interval endpoints C D")->expected(2)->capture_default_str();
    app->add_option("--scale", scale, "Target scale j (finest space V_j)")->capture_default_str();
    app->add_option("--refine", refine, "Translation refinement l (lattice Z/2^l)")->capture_default_str();
  }
  DictionarySpec spec() const { return {order, interval.at(0), interval.at(1), scale, refine}; }
};

struct PursuitFlags {
  std::string signal = "chirp";
  double tol = 1e-2;
  bool absolute = false;
  std::size_t max_atoms = 0;
  bool no_swap = false;
  bool no_backward = false;
  bool serial = false;
  int grid_exp = -1;

  void attach(CLI::App* app, bool with_tol) {
    app->add_option("--signal", signal, "'chirp' or a path to a one-column text/CSV file")->capture_default_str();
    if (with_tol) app->add_option("--tol", tol, "Residual tolerance (relative by default)")->capture_default_str();
    app->add_flag("--absolute", absolute, "Interpret the tolerance as an absolute residual");
    app->add_option("--max-atoms", max_atoms, "Cap on selected atoms (0 = no cap)");
    app->add_flag("--no-swap", no_swap, "Skip the swapping stage");
    app->add_flag("--no-backward", no_backward, "Skip the backward pruning stage");
    app->add_flag("--serial", serial, "Use the serial reference kernels");
    app->add_option("--grid-exp", grid_exp, "Sampling grid step 2^-r (default j + 1)");
  }
  PursuitConfig config(double tolerance) const {
    PursuitConfig cfg;
    cfg.tolerance = tolerance;
    cfg.mode = absolute ? ToleranceMode::Absolute : ToleranceMode::Relative;
    cfg.max_atoms = max_atoms;
    cfg.swap_enabled = !no_swap;
    cfg.backward_enabled = !no_backward;
    cfg.parallel = !serial;
    return cfg;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cardinal spline wavelet dictionaries: construction, span checks and sparse approximation"};
  app.require_subcommand(1);

  auto* dict_cmd = app.add_subcommand("dict", "Dictionary construction and coherence");
  dict_cmd->require_subcommand(1);

  DictFlags build_flags;
  std::string build_out = "-";
  auto* build_cmd = dict_cmd->add_subcommand("build", "Write a dictionary manifest (JSON)");
  build_flags.attach(build_cmd);
  build_cmd->add_option("--out", build_out, "Output path ('-' for stdout)");

  DictFlags coh_flags;
  int max_p = 200;
  std::string coh_out = "-";
  auto* coh_cmd = dict_cmd->add_subcommand("coherence", "Cumulative coherence mu(p) as CSV (p,mu)");
  coh_flags.attach(coh_cmd);
  coh_cmd->add_option("--max-p", max_p, "Largest p")->capture_default_str();
  coh_cmd->add_option("--out", coh_out, "Output path ('-' for stdout)");

  DictFlags span_flags;
  std::string family = "dictionary";
  auto* span_cmd = app.add_subcommand("verify-span", "Check the span of D_{j,l} (or W_{j,l}, V_{j,l}); exit 0 on pass");
  span_flags.attach(span_cmd);
  span_cmd->add_option("--family", family, "dictionary: D_{j,l} vs V_j; wavelet: W_{j,l} vs V_{j+l}; scaling: V_{j,l} vs V_{j+l}")
      ->check(CLI::IsMember({"dictionary", "wavelet", "scaling"}))
      ->capture_default_str();

  DictFlags approx_dict;
  PursuitFlags approx_flags;
  std::string approx_out = "-";
  std::string approx_csv;
  int approx_coh = 0;
  auto* approx_cmd = app.add_subcommand("approx", "Forward / swap / backward pursuit of a signal");
  approx_dict.attach(approx_cmd);
  approx_flags.attach(approx_cmd, true);
  approx_cmd->add_option("--out", approx_out, "Report JSON path ('-' for stdout)");
  approx_cmd->add_option("--csv", approx_csv, "Also write the decomposition as CSV");
  approx_cmd->add_option("--coherence", approx_coh, "Include mu(1..P) summary in the report");

  DictFlags sweep_dict;
  PursuitFlags sweep_flags;
  double from = 1e-3, to = 1e-1;
  int steps = 5;
  bool linear = false;
  std::string sweep_out = "-";
  auto* sweep_cmd = app.add_subcommand("sweep-tol", "Run approx over a tolerance sweep (CSV)");
  sweep_dict.attach(sweep_cmd);
  sweep_flags.attach(sweep_cmd, false);
  sweep_cmd->add_option("--from", from, "First tolerance")->capture_default_str();
  sweep_cmd->add_option("--to", to, "Last tolerance")->capture_default_str();
  sweep_cmd->add_option("--steps", steps, "Number of tolerances")->capture_default_str();
  sweep_cmd->add_flag("--linear", linear, "Linear instead of logarithmic spacing");
  sweep_cmd->add_option("--out", sweep_out, "Output path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build_cmd) {
      const Dictionary dict = build_dictionary(build_flags.spec());
      write_text(build_out, manifest(dict).dump(2) + "\n");
      return 0;
    }
    if (*coh_cmd) {
      const Dictionary dict = build_dictionary(coh_flags.spec());
      write_text(coh_out, cumulative_coherence(dict.gram(), max_p).to_csv());
      return 0;
    }
    if (*span_cmd) {
      const DictionarySpec s = span_flags.spec();
      std::vector<Atom> atoms;
      SpaceParams target = s.target();
      const SpaceParams space{s.order, s.c, s.d, s.scale};
      if (family == "dictionary") {
        atoms = build_dictionary(s).atoms();
      } else if (family == "wavelet") {
        atoms = dict_wavelet(space, s.refine);
        target = space.at_scale(s.scale + s.refine);
      } else {
        atoms = dict_scaling(space, s.refine);
        target = space.at_scale(s.scale + s.refine);
      }
      const SpanReport rep = verify_span(atoms, target);
      std::printf("family=%s %s atoms=%zu expected_dim=%lld exact_rank=%d gram_rank=%d "
                  "sampled_rank=%d max_projection_residual=%.3e inclusion=%s -> %s\n",
                  family.c_str(), s.describe().c_str(), rep.atom_count, static_cast<long long>(rep.expected_dim),
                  rep.exact_rank, rep.gram_rank, rep.sampled_rank, rep.max_projection_residual, rep.inclusion_ok ? "ok" : "FAIL",
                  rep.pass ? "PASS" : "FAIL");
      return rep.pass ? 0 : 1;
    }
    if (*approx_cmd) {
      const auto prep = prepare_experiment(SignalSpec::parse(approx_flags.signal), approx_dict.spec(),
                                           approx_flags.grid_exp);
      const auto rep = run_prepared(prep, approx_flags.config(approx_flags.tol), approx_coh);
      write_text(approx_out, rep.to_json(prep.dict, prep.sampled).dump(2) + "\n");
      if (!approx_csv.empty()) write_text(approx_csv, decomposition_csv(rep.decomposition, prep.dict, prep.sampled));
      if (!rep.decomposition.converged) std::cerr << "warning: tolerance not reached\n";
      return 0;
    }
    if (*sweep_cmd) {
      const auto prep = prepare_experiment(SignalSpec::parse(sweep_flags.signal), sweep_dict.spec(),
                                           sweep_flags.grid_exp);
      std::ostringstream out;
      out.precision(10);
      out << "tol,N_forward,N_swap,N,residual,relative_residual,swaps,converged\n";
      for (double tol : tolerance_sweep(from, to, steps, !linear)) {
        const auto rep = run_prepared(prep, sweep_flags.config(tol));
        const auto& d = rep.decomposition;
        std::size_t n_fwd = 0, n_swap = 0;
        for (const auto& st : d.stages) {
          if (st.stage == "forward") n_fwd = st.atoms;
          if (st.stage == "swap") n_swap = st.atoms;
        }
        out << tol << ',' << n_fwd << ',' << n_swap << ',' << d.size() << ',' << d.residual_norm << ','
            << (d.signal_norm > 0 ? d.residual_norm / d.signal_norm : 0.0) << ',' << d.swaps_accepted << ','
            << (d.converged ? 1 : 0) << '\n';
      }
      write_text(sweep_out, out.str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
