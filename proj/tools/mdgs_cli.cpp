#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mdgs/experiments.hpp"

namespace {

constexpr const char* kFooter = R"(Outputs (written to --out):
  gen         graph.json {n, x, edges: [[u, v, w]]}; edges.csv  edge,u,v,w
  solve-tree  solution.json {opt_value, dp_value, dimers, monomers, near_ties}
  oracle      oracle.json {opt_value, enumeration_value, agree, dimers}
  certify     certificates.csv  root,H,edge,w,lo,hi,status; certify_summary.json
  rde         rde_summary.json {ks_final, cdf_residual, invariant_lhs, invariant_rhs,
              gap, energy, energy_se}; rde_diagnostics.csv
              iteration,ks_plus_minus,ks_plus_same_parity,ks_minus_same_parity
  lln         lln.csv  replica,n,per_vertex_opt,rde_prediction,z_score; lln_summary.json
  decay       decay.csv  first,second,distance,state_o,state_o2,undecided_o,undecided_o2;
              undecided.csv  H,undecided_fraction,undecided_edges,edges; decay_summary.json
  plot        undecided_fraction.svg, ks.svg from the CSVs in the config's "input" directory
Every run also writes manifest.json. Exit codes: 0 ok, 2 config error, 3 other error.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monomer-dimer ground states on sparse random graphs"};
  app.footer(kFooter);
  app.require_subcommand(1);

  mdgs::experiments::RunOptions options;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", options.config_path, "Experiment config (JSON)")->required();
  app.add_option("--seed", seed, "Master seed; overrides the config's seed");
  app.add_option("--out", options.out_dir, "Output directory")->capture_default_str();
  app.add_option("--workers", options.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  for (const auto& name : mdgs::experiments::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    sub->callback([&options, name] { options.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  options.seed = seed;
  return mdgs::experiments::run(options);
}
