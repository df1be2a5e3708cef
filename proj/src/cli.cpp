// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "oldroyd/estimates.hpp"
#include "oldroyd/io.hpp"
#include "oldroyd/solver.hpp"
#include "oldroyd/stability.hpp"
#include "oldroyd/verify.hpp"

namespace oldroyd::cli {

namespace {

std::string resolve_dir(const std::string& requested, const std::string& fallback) {
  if (const char* env = std::getenv("OLDROYD_OUT_DIR"); env && *env) return env;
  if (!requested.empty()) return requested;
  return fallback;
}

void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump() << '\n' << std::flush; }

template <FieldKind K>
NormReport field_norm(const Snapshot& snap, std::optional<Scalar> hybrid_s, Scalar s, Scalar p, Scalar r) {
  const GridPtr grid = snapshot_grid(snap);
  const Field<K> f = snapshot_field<K>(snap, grid);
  const DyadicPartition part(*grid);
  NormReport rep;
  rep.q_min = part.q_min();
  rep.q_max = part.q_max();
  if (hybrid_s) {
    const HybridNorm h = hybrid_norm(f, *hybrid_s, part);
    rep.norm_kind = "hybrid";
    rep.s = *hybrid_s;
    rep.value = h.value;
    rep.low_part = h.low;
    rep.high_part = h.high;
  } else {
    rep.norm_kind = "besov";
    rep.s = s;
    rep.p = p;
    rep.r = r;
    rep.value = besov_norm(f, BesovIndex{s, p, r}, part);
  }
  return rep;
}

Scalar parse_exponent(const std::string& v) {
  if (v == "inf" || v == "infinity") return kInfinity;
  try {
    size_t pos = 0;
    const Scalar x = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError("bad exponent: " + v);
    return x;
  } catch (const std::logic_error&) {
    throw ConfigError("bad exponent: " + v);
  }
}

std::vector<Scalar> default_regularities(EstimateKind kind, int d) {
  if (kind == EstimateKind::ProductBesov) return {0.0};
  const Scalar solver_s = d >= 3 ? 0.0 : -0.25;
  std::vector<Scalar> out;
  for (Scalar s : {0.0, 0.5 * (0.5 * d - 1.0), solver_s})
    if (admissible(kind, d, s) && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oldroyd-B pseudo-spectral simulator and Littlewood-Paley analysis"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  auto* sim = app.add_subcommand("simulate", "run a simulation, writing the ledger and snapshots");
  sim->add_option("config", config_path, "solver config JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "output directory");

  std::string field_path;
  double s = 0;
  std::string p_str = "2", r_str = "2";
  std::optional<double> hybrid_s;
  auto* norms = app.add_subcommand("norms", "Besov or hybrid norm of a field snapshot");
  norms->add_option("field", field_path, "field-v1 snapshot")->required()->check(CLI::ExistingFile);
  auto* s_opt = norms->add_option("--s", s, "regularity");
  auto* p_opt = norms->add_option("--p", p_str, "integrability (only 2 is supported)");
  auto* r_opt = norms->add_option("--r", r_str, "summation exponent: 1, 2 or inf");
  auto* h_opt = norms->add_option("--hybrid", hybrid_s, "hybrid norm with low-frequency regularity s");
  h_opt->excludes(s_opt)->excludes(p_opt)->excludes(r_opt);

  std::string suite;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--seed", seed, "random seed");

  std::string estimate = "all";
  int samples = 100, dim = 2;
  std::vector<int> ns{64, 128};
  std::vector<double> s_list;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench-estimates", "fit product and commutator constants per resolution");
  bench->add_option("estimate", estimate, "estimate name or 'all'");
  bench->add_option("--samples", samples, "random pairs per fit")->check(CLI::PositiveNumber);
  bench->add_option("--n", ns, "resolutions")->delimiter(',');
  bench->add_option("--d", dim, "dimension")->check(CLI::IsMember({2, 3}));
  bench->add_option("--s", s_list, "regularities")->delimiter(',');
  bench->add_option("--seed", bench_seed, "random seed");
  bench->add_option("--out", out_dir, "output directory");

  double delta = 1e-6;
  auto* stab = app.add_subcommand("stability", "twin-run difference experiment");
  stab->add_option("config", config_path, "solver config JSON")->required()->check(CLI::ExistingFile);
  stab->add_option("--delta", delta, "perturbation size")->check(CLI::NonNegativeNumber);
  stab->add_option("--out", out_dir, "output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit(err, {{"error", "usage"}, {"message", e.what()}});
    return kUsageError;
  }

  try {
    if (*sim) {
      SolverConfig cfg = load_config(config_path);
      cfg.output.dir = resolve_dir(out_dir, cfg.output.dir.empty() ? "out" : cfg.output.dir);
      const SimulationResult res = simulate(cfg);
      const BoundReport b = check_global_bound(res.ledger, cfg.params, res.ledger.rows.front().E);
      emit(out, {{"command", "simulate"},
                 {"rows", res.ledger.rows.size()},
                 {"ledger", res.ledger_path},
                 {"snapshots", res.snapshots},
                 {"bound", to_json(b)}});
      return kOk;
    }
    if (*norms) {
      const Snapshot snap = read_snapshot(field_path);
      const Scalar p = parse_exponent(p_str);
      const Scalar r = parse_exponent(r_str);
      NormReport rep;
      if (snap.kind == "scalar") rep = field_norm<FieldKind::Scalar>(snap, hybrid_s, s, p, r);
      else if (snap.kind == "velocity") rep = field_norm<FieldKind::Vector>(snap, hybrid_s, s, p, r);
      else if (snap.kind == "stress") rep = field_norm<FieldKind::SymTensor>(snap, hybrid_s, s, p, r);
      else throw IoError("unknown field kind: " + snap.kind);
      nlohmann::json j = to_json(rep);
      if (hybrid_s) {
        j.erase("p");
        j.erase("r");
      }
      emit(out, j);
      return kOk;
    }
    if (*verify) {
      const SuiteResult r = run_suite(suite, seed);
      emit(out, to_json(r));
      return r.pass ? kOk : kVerificationFailed;
    }
    if (*bench) {
      std::vector<EstimateKind> kinds;
      if (estimate == "all") kinds = all_estimates();
      else kinds.push_back(parse_estimate(estimate));
      nlohmann::json table = nlohmann::json::array();
      for (EstimateKind k : kinds) {
        const std::vector<Scalar> regs = s_list.empty() ? default_regularities(k, dim) : s_list;
        for (Scalar sv : regs) {
          for (int n : ns) {
            const EstimateFit f = fit_estimate(k, dim, n, sv, samples, bench_seed);
            const nlohmann::json row = {{"estimate", estimate_name(k)}, {"d", dim},          {"n", n},
                                        {"s", sv},                      {"samples", samples}, {"seed", bench_seed},
                                        {"constant", f.max_ratio},      {"min_ratio", f.min_ratio}};
            emit(out, row);
            table.push_back(row);
          }
        }
      }
      write_json(output_path(resolve_dir(out_dir, "out"), "estimates.json"), table);
      return kOk;
    }
    if (*stab) {
      SolverConfig cfg = load_config(config_path);
      const std::string dir = resolve_dir(out_dir, cfg.output.dir.empty() ? "out" : cfg.output.dir);
      const StabilityReport rep = stability_experiment(cfg, delta);
      const std::string path = output_path(dir, "stability.json");
      write_json(path, to_json(rep));
      emit(out, {{"command", "stability"},
                 {"report", path},
                 {"delta", rep.delta},
                 {"d0", rep.d0},
                 {"c_hat", rep.c_hat},
                 {"c_hat_refined", rep.c_hat_refined},
                 {"relative_change", rep.relative_change},
                 {"identical", rep.identical},
                 {"envelope", rep.envelope}});
      return kOk;
    }
  } catch (const DivergenceError& e) {
    emit(err, {{"error", "divergence"}, {"message", e.what()}, {"step", e.step()}, {"time", e.time()}});
    return kDiverged;
  } catch (const Error& e) {
    emit(err, {{"error", "input"}, {"message", e.what()}});
    return kUsageError;
  }
  return kUsageError;
}

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace oldroyd::cli
