#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdgs/distributions.hpp"
#include "mdgs/error.hpp"
#include "mdgs/exact_oracle.hpp"
#include "mdgs/generators.hpp"
#include "mdgs/graph.hpp"
#include "mdgs/json_io.hpp"
#include "mdgs/local_bracket.hpp"
#include "mdgs/parallel.hpp"
#include "mdgs/rde_population.hpp"
#include "mdgs/rng.hpp"
#include "mdgs/tree_solver.hpp"

namespace mdgs::experiments {

using io::json;
using io::Reader;

inline constexpr const char* kVersion = "0.1.0";

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"gen", "solve-tree", "oracle", "certify", "rde", "lln", "decay", "plot"};
  return names;
}

/// Shortest text that reads back to the same double; "inf" / "-inf" for infinities.
inline std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string fmt(const ExtReal& v) { return fmt(v.to_double()); }

// ---------------------------------------------------------------------------
// Config pieces

inline WeightLaws parse_weights(const Reader& r) {
  return {io::parse_vertex(r.at("vertex_weight")), io::parse_edge(r.at("edge_weight"))};
}

inline OffspringConvention parse_convention(const Reader& r) {
  const std::string c = r.string_or("convention", "unimodular");
  if (c == "unimodular") return OffspringConvention::unimodular;
  if (c == "literal") return OffspringConvention::literal;
  Reader::fail(r.path() + ".convention", "expected 'unimodular' or 'literal'");
}

inline DegreeDistribution offspring_for(const DegreeDistribution& root, OffspringConvention convention) {
  return UbgwLaw::from_root_law(root, convention).offspring;
}

/// model: {"type": "er", "n", "c"} | {"type": "config_model", "n", "degree"} |
///        {"type": "ubgw", "degree", "depth", "convention"?} | {"type": "file", "path"} |
///        {"type": "inline", "graph": {...}}
inline WeightedGraph build_graph(const Reader& model, const WeightLaws& weights, std::uint64_t seed) {
  const std::string type = model.at("type").string();
  if (type == "er") {
    const auto n = model.at("n").unsigned_integer();
    const double c = model.at("c").number();
    return model.build([&] { return sample_er(n, c, weights, seed); });
  }
  if (type == "config_model") {
    const auto n = model.at("n").unsigned_integer();
    const auto pi = io::parse_degree(model.at("degree"));
    return model.build([&] { return sample_configuration_model(pi, n, weights, seed).graph; });
  }
  if (type == "ubgw") {
    const auto pi = io::parse_degree(model.at("degree"));
    const auto depth = model.at("depth").unsigned_integer();
    const auto law = UbgwLaw::from_root_law(pi, parse_convention(model));
    return sample_ubgw_ball(law, weights, depth, seed).graph;
  }
  if (type == "file") return io::graph_from_json(io::read_json_file(model.at("path").string()), model.path());
  if (type == "inline") return io::graph_from_json(model.at("graph").node(), model.path() + ".graph");
  Reader::fail(model.path() + ".type", "unknown model '" + type + "'");
}

struct RdeSpec {
  DegreeDistribution root_law = DegreeDistribution::point(0);
  RdeLaws laws{DegreeDistribution::point(0), VertexWeightDist::constant(0.0), EdgeWeightDist::exponential(1.0)};
  std::size_t pool = 100'000;
  std::size_t iterations = 200;
  std::size_t energy_samples = 1'000'000;
  std::size_t monte_carlo = 100'000;
  std::size_t grid = 50;
  bool common_random_numbers = false;
};

inline RdeSpec parse_rde_spec(const Reader& r) {
  RdeSpec spec;
  spec.root_law = io::parse_degree(r.at("degree"));
  const auto weights = parse_weights(r);
  spec.laws = {offspring_for(spec.root_law, parse_convention(r)), weights.vertex, weights.edge};
  spec.pool = r.unsigned_or("N", spec.pool);
  spec.iterations = r.unsigned_or("T", spec.iterations);
  spec.energy_samples = r.unsigned_or("S", spec.energy_samples);
  spec.monte_carlo = r.unsigned_or("M", spec.monte_carlo);
  spec.grid = r.unsigned_or("grid", spec.grid);
  spec.common_random_numbers = r.boolean_or("crn", false);
  if (spec.pool == 0) Reader::fail(r.path() + ".N", "pool size must be positive");
  if (spec.grid == 0) Reader::fail(r.path() + ".grid", "grid must have at least one point");
  if (spec.monte_carlo == 0) Reader::fail(r.path() + ".M", "Monte Carlo size must be positive");
  if (spec.energy_samples < 2) Reader::fail(r.path() + ".S", "need at least two energy samples");
  return spec;
}

struct RdeReport {
  AlternatingResult pools;
  double ks_final = 0.0;
  double cdf_residual = 0.0;
  std::optional<InvariantEstimate> invariant;  // absent when the offspring law is a point mass at 0
  EnergyEstimate energy;
};

/// Runs both lineages and every fixed-point diagnostic on the final pools.
inline RdeReport solve_rde(const RdeSpec& spec, std::uint64_t seed, std::size_t workers = 1) {
  RdeReport rep;
  AlternatingOptions options;
  options.common_random_numbers = spec.common_random_numbers;
  options.workers = workers;
  rep.pools = run_alternating(spec.laws, spec.pool, spec.iterations, seeding::derive(seed, "rde-lineages"), options);
  const auto& plus = rep.pools.plus;
  const auto& minus = rep.pools.minus;
  rep.ks_final = ks_distance(plus, minus);
  rep.cdf_residual = cdf_residual(plus, minus, spec.laws, quantile_grid(minus, spec.grid), spec.monte_carlo,
                                  seeding::derive(seed, "cdf-residual"));
  if (spec.laws.offspring.pmf(0) < 1.0)
    rep.invariant = invariant_gap(plus, minus, spec.laws.offspring, spec.laws.vertex);
  rep.energy = energy_density(minus, spec.root_law, spec.laws.vertex, spec.laws.edge, spec.energy_samples,
                              seeding::derive(seed, "energy"), workers);
  return rep;
}

// ---------------------------------------------------------------------------
// Plotting

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart with linear axes.
inline std::string svg_line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                  const std::vector<Series>& series) {
  constexpr double width = 640;
  constexpr double height = 400;
  constexpr double left = 70;
  constexpr double right = 20;
  constexpr double top = 40;
  constexpr double bottom = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  y0 = std::min(y0, 0.0);
  if (y1 == y0) y1 = y0 + 1;
  const auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
  const auto py = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
     << height - bottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">"
       << fmt(std::round(xv * 1000) / 1000) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">"
       << fmt(std::round(yv * 1000) / 1000) << "</text>\n";
  }
  os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
     << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << (top + height - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (top + height - bottom) / 2 << ")\">" << ylabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = palette[k % 5];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      if (!std::isfinite(series[k].x[i]) || !std::isfinite(series[k].y[i])) continue;
      os << fmt(px(series[k].x[i])) << ',' << fmt(py(series[k].y[i])) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << width - right - 150 << "\" y=\"" << top + 14 * (k + 1) << "\" fill=\"" << color << "\">"
       << series[k].name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Columns of a CSV file with a header line, parsed as numbers ("inf" allowed).
inline std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                         std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  header.clear();
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  std::vector<std::vector<double>> cols(header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t i = 0;
    for (std::string cell; std::getline(ls, cell, ',') && i < cols.size(); ++i)
      cols[i].push_back(cell.empty() ? NAN : std::strtod(cell.c_str(), nullptr));
  }
  return cols;
}

// ---------------------------------------------------------------------------
// Run driver

struct RunOptions {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::size_t workers = 1;
};

class Context {
 public:
  Context(const RunOptions& options, json config)
      : options_(options), config_(std::move(config)), reader_(config_, "") {
    if (reader_.has("experiment") && reader_.at("experiment").string() != options.command)
      Reader::fail("experiment", "config is for '" + reader_.at("experiment").string() + "', not '" +
                                     options.command + "'");
    if (options.seed) seed_ = *options.seed;
    else if (reader_.has("seed")) seed_ = reader_.at("seed").unsigned_integer();
    else Reader::fail("seed", "missing required field (or pass --seed)");
  }

  const Reader& config() const { return reader_; }
  const json& raw() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t workers() const { return std::max<std::size_t>(1, options_.workers); }
  std::filesystem::path out() const { return options_.out_dir; }
  const std::vector<std::string>& artifacts() const { return artifacts_; }

  void write(const std::string& name, const std::string& text) {
    io::write_text_file((out() / name).string(), text);
    artifacts_.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  void note(const std::string& name) { artifacts_.push_back(name); }

 private:
  RunOptions options_;
  json config_;
  Reader reader_;
  std::uint64_t seed_ = 0;
  std::vector<std::string> artifacts_;
};

inline json dimer_list(const WeightedGraph& g, const MonomerDimerConfig& c) {
  json out = json::array();
  for (EdgeId e : c.dimers()) out.push_back(json::array({e, g.edge(e).u, g.edge(e).v}));
  return out;
}

inline void cmd_gen(Context& ctx) {
  const auto& r = ctx.config();
  const auto g = build_graph(r.at("model"), parse_weights(r), seeding::derive(ctx.seed(), "graph"));
  ctx.write_json("graph.json", io::graph_to_json(g));
  std::ostringstream csv;
  write_edge_csv(csv, g);
  ctx.write("edges.csv", csv.str());
}

inline void cmd_solve_tree(Context& ctx) {
  const auto& r = ctx.config();
  const auto g = build_graph(r.at("model"), parse_weights(r), seeding::derive(ctx.seed(), "graph"));
  const auto sol = solve_tree(g);
  json monomers = json::array();
  for (VertexId v : sol.config.monomers()) monomers.push_back(v);
  ctx.write_json("solution.json", json{{"schema_version", io::kSchemaVersion},
                                       {"n", g.vertex_count()},
                                       {"edges", g.edge_count()},
                                       {"opt_value", sol.value},
                                       {"dp_value", opt_value_dp(g)},
                                       {"max_recursion_residual", recursion_residual(g, sol.messages)},
                                       {"near_ties", sol.near_ties},
                                       {"dimers", dimer_list(g, sol.config)},
                                       {"monomers", monomers}});
}

inline void cmd_oracle(Context& ctx) {
  const auto& r = ctx.config();
  const auto g = build_graph(r.at("model"), parse_weights(r), seeding::derive(ctx.seed(), "graph"));
  const auto max_rank = r.unsigned_or("max_cycle_rank", 8);
  const auto max_edges = r.unsigned_or("max_enumeration_edges", 24);
  const auto exact = solve_sparse_exact(g, max_rank);
  json out{{"schema_version", io::kSchemaVersion},
           {"n", g.vertex_count()},
           {"edges", g.edge_count()},
           {"opt_value", exact.value},
           {"max_cycle_rank", exact.max_cycle_rank},
           {"near_ties", exact.near_ties},
           {"dimers", dimer_list(g, exact.config)}};
  if (g.edge_count() <= max_edges) {
    const auto en = enumerate_optimal(g, max_edges);
    out["enumeration_value"] = en.value;
    out["enumeration_optima"] = en.optimal.size();
    out["agree"] = std::abs(en.value - exact.value) <= 1e-9 * (1.0 + std::abs(en.value));
  } else {
    out["enumeration_value"] = nullptr;
  }
  ctx.write_json("oracle.json", out);
}

inline std::vector<std::size_t> parse_depths(const Reader& r) {
  std::vector<std::size_t> depths;
  if (r.has("depths")) {
    for (const auto& d : r.at("depths").array()) depths.push_back(d.unsigned_integer());
  } else {
    depths.push_back(r.at("H").unsigned_integer());
  }
  if (depths.empty()) Reader::fail("depths", "at least one depth is required");
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  return depths;
}

/// Explicit "roots" list, or "root_count" uniform draws (every vertex when
/// root_count >= n).
inline std::vector<VertexId> parse_roots(const Reader& r, const WeightedGraph& g, std::uint64_t seed) {
  std::vector<VertexId> roots;
  if (r.has("roots")) {
    for (const auto& v : r.at("roots").array()) {
      const auto id = v.unsigned_integer();
      if (id >= g.vertex_count()) Reader::fail(v.path(), "root out of range");
      roots.push_back(static_cast<VertexId>(id));
    }
    return roots;
  }
  const auto count = r.unsigned_or("root_count", g.vertex_count());
  if (count >= g.vertex_count()) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) roots.push_back(v);
    return roots;
  }
  Rng rng(seeding::derive(seed, "roots"));
  for (std::size_t i = 0; i < count; ++i) roots.push_back(static_cast<VertexId>(rng.below(g.vertex_count())));
  return roots;
}

inline void cmd_certify(Context& ctx) {
  const auto& r = ctx.config();
  const auto laws = parse_weights(r);
  const auto g = build_graph(r.at("model"), laws, seeding::derive(ctx.seed(), "graph"));
  const auto depths = parse_depths(r);
  const auto roots = parse_roots(r, g, ctx.seed());
  const double m = laws.vertex.minimum();

  struct PerRoot {
    std::string rows;
    std::vector<std::size_t> skipped;
  };
  std::vector<PerRoot> per(roots.size());
  parallel_for(roots.size(), ctx.workers(), [&](std::size_t i) {
    const VertexId o = roots[i];
    std::ostringstream os;
    for (std::size_t H : depths) {
      if (!bfs_ball(g, o, H).tree) {
        per[i].skipped.push_back(H);
        continue;
      }
      for (const auto& c : certify_edges(g, o, H, m))
        os << o << ',' << H << ',' << c.edge << ',' << fmt(c.w) << ',' << fmt(c.lo) << ',' << fmt(c.hi) << ','
           << to_string(c.status) << '\n';
    }
    per[i].rows = os.str();
  });
  std::string csv = "root,H,edge,w,lo,hi,status\n";
  std::vector<std::size_t> skipped(depths.size(), 0);
  for (const auto& p : per) {
    csv += p.rows;
    for (std::size_t H : p.skipped)
      ++skipped[static_cast<std::size_t>(std::find(depths.begin(), depths.end(), H) - depths.begin())];
  }
  ctx.write("certificates.csv", csv);

  const auto profile = undecided_fraction(g, depths, roots, m);
  json per_depth = json::array();
  for (std::size_t i = 0; i < depths.size(); ++i)
    per_depth.push_back(json{{"H", depths[i]},
                             {"undecided_fraction", profile.fraction[i]},
                             {"roots_with_cycles", skipped[i]}});
  ctx.write_json("certify_summary.json", json{{"schema_version", io::kSchemaVersion},
                                              {"roots", roots.size()},
                                              {"profile_roots_used", profile.roots_used},
                                              {"profile_roots_skipped", profile.roots_skipped},
                                              {"depths", per_depth}});
}

inline json rde_summary(const RdeReport& rep) {
  json j{{"schema_version", io::kSchemaVersion},
         {"ks_final", rep.ks_final},
         {"cdf_residual", rep.cdf_residual},
         {"energy", rep.energy.estimate},
         {"energy_se", rep.energy.standard_error},
         {"root_dimer_fraction", rep.energy.dimer_fraction}};
  if (rep.invariant) {
    j["invariant_lhs"] = rep.invariant->lhs;
    j["invariant_rhs"] = rep.invariant->rhs;
    j["gap"] = rep.invariant->gap;
  } else {
    j["invariant_lhs"] = j["invariant_rhs"] = j["gap"] = nullptr;
  }
  return j;
}

inline std::string diagnostics_csv(const std::vector<IterationDiagnostics>& diags) {
  std::string csv = "iteration,ks_plus_minus,ks_plus_same_parity,ks_minus_same_parity\n";
  for (const auto& d : diags)
    csv += std::to_string(d.iteration) + ',' + fmt(d.ks_plus_minus) + ',' +
           (std::isnan(d.ks_plus_same_parity) ? "" : fmt(d.ks_plus_same_parity)) + ',' +
           (std::isnan(d.ks_minus_same_parity) ? "" : fmt(d.ks_minus_same_parity)) + '\n';
  return csv;
}

inline void cmd_rde(Context& ctx) {
  const auto& r = ctx.config();
  const auto spec = parse_rde_spec(r);
  const auto rep = solve_rde(spec, ctx.seed(), ctx.workers());
  ctx.write_json("rde_summary.json", rde_summary(rep));
  ctx.write("rde_diagnostics.csv", diagnostics_csv(rep.pools.diagnostics));
  if (r.boolean_or("export_pools", false)) {
    io::write_pool((ctx.out() / "pool_plus").string(), rep.pools.plus);
    io::write_pool((ctx.out() / "pool_minus").string(), rep.pools.minus);
    for (const char* name : {"pool_plus.bin", "pool_plus.json", "pool_minus.bin", "pool_minus.json"}) ctx.note(name);
  }
}

struct LlnRow {
  std::size_t replica = 0;
  std::size_t n = 0;
  double per_vertex_opt = 0.0;
  double opt_se = 0.0;
  double prediction = 0.0;
  double z = 0.0;
  std::size_t max_cycle_rank = 0;
};

struct LlnResult {
  std::vector<LlnRow> rows;
  double prediction = 0.0;
  double prediction_se = 0.0;
  double spread = 0.0;  // sample standard deviation / mean of per_vertex_opt
  double max_abs_z = 0.0;
};

/// Per-vertex exact optimum on independent G(n, c/n) replicas against the
/// population-dynamics prediction. The replica standard error treats the
/// component contributions as independent:
///   se^2 = sum_C (OPT_C - |C| * mean)^2 / n^2.
inline LlnResult lln_experiment(std::size_t n, double c, std::size_t replicas, const WeightLaws& laws,
                                const RdeSpec& spec, std::size_t max_rank, std::uint64_t seed, std::size_t workers) {
  if (replicas == 0) throw Error(ErrorKind::domain, "need at least one replica");
  LlnResult out;
  const auto rep = solve_rde(spec, seeding::derive(seed, "rde"), workers);
  out.prediction = rep.energy.estimate;
  out.prediction_se = rep.energy.standard_error;
  out.rows.resize(replicas);
  parallel_for(replicas, workers, [&](std::size_t k) {
    const auto g = sample_er(n, c, laws, seeding::derive(seed, "replica", k));
    const auto exact = solve_sparse_exact(g, max_rank);
    const auto comps = components(g);
    LlnRow& row = out.rows[k];
    row.replica = k;
    row.n = n;
    row.per_vertex_opt = exact.value / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const double d = exact.component_values[i] - static_cast<double>(comps[i].vertices.size()) * row.per_vertex_opt;
      ss += d * d;
    }
    row.opt_se = std::sqrt(ss) / static_cast<double>(n);
    row.prediction = out.prediction;
    const double se = std::hypot(row.opt_se, out.prediction_se);
    row.z = se > 0.0 ? (row.per_vertex_opt - out.prediction) / se : 0.0;
    row.max_cycle_rank = exact.max_cycle_rank;
  });
  double mean = 0.0;
  for (const auto& row : out.rows) {
    mean += row.per_vertex_opt;
    out.max_abs_z = std::max(out.max_abs_z, std::abs(row.z));
  }
  mean /= static_cast<double>(replicas);
  if (replicas > 1 && mean != 0.0) {
    double ss = 0.0;
    for (const auto& row : out.rows) ss += (row.per_vertex_opt - mean) * (row.per_vertex_opt - mean);
    out.spread = std::sqrt(ss / static_cast<double>(replicas - 1)) / std::abs(mean);
  }
  return out;
}

inline void cmd_lln(Context& ctx) {
  const auto& r = ctx.config();
  const auto n = r.at("n").unsigned_integer();
  const double c = r.at("c").number();
  if (c >= 1.0)
    std::cerr << "warning: c = " << c << " is not subcritical; cycle ranks may exceed the exact solver's limit\n";
  json rde_config = ctx.raw();
  rde_config["degree"] = json{{"type", "poisson"}, {"c", c}};
  if (c == 0.0) rde_config["degree"] = json{{"type", "point"}, {"k", 0}};
  const auto spec = parse_rde_spec(Reader(rde_config, ""));
  const auto res = lln_experiment(n, c, r.unsigned_or("replicas", 5), parse_weights(r), spec,
                                  r.unsigned_or("max_cycle_rank", 8), ctx.seed(), ctx.workers());
  std::string csv = "replica,n,per_vertex_opt,rde_prediction,z_score\n";
  json rows = json::array();
  for (const auto& row : res.rows) {
    csv += std::to_string(row.replica) + ',' + std::to_string(row.n) + ',' + fmt(row.per_vertex_opt) + ',' +
           fmt(row.prediction) + ',' + fmt(row.z) + '\n';
    rows.push_back(json{{"replica", row.replica}, {"opt_se", row.opt_se}, {"max_cycle_rank", row.max_cycle_rank}});
  }
  ctx.write("lln.csv", csv);
  ctx.write_json("lln_summary.json", json{{"schema_version", io::kSchemaVersion},
                                          {"rde_prediction", res.prediction},
                                          {"rde_prediction_se", res.prediction_se},
                                          {"replica_spread", res.spread},
                                          {"max_abs_z", res.max_abs_z},
                                          {"replicas", rows}});
}

struct DecayPair {
  VertexId first = 0;
  VertexId second = 0;
  std::optional<std::size_t> distance;
  std::optional<RootState> first_state;  // empty: ball is not a tree
  std::optional<RootState> second_state;
};

struct DecayResult {
  std::vector<DecayPair> pairs;
  double p11 = 0.0;
  double p1 = 0.0;
  double q1 = 0.0;
  double statistic = 0.0;       // p11 - p1 * q1
  double undecided_mass = 0.0;  // pairs with an undecided or non-tree root
  UndecidedProfile profile;
};

inline bool is_decided(const std::optional<RootState>& s) { return s && *s != RootState::undecided; }
inline bool is_dimer(const std::optional<RootState>& s) { return s && *s == RootState::dimer; }

/// Root states at two far-apart roots. "1" is the Dimer state; pairs are
/// uniform among those at distance >= min_distance (different components
/// count as infinitely far).
inline DecayResult decay_experiment(const WeightedGraph& g, double m, std::size_t H, std::size_t pair_count,
                                    std::size_t min_distance, const std::vector<std::size_t>& profile_depths,
                                    std::size_t profile_roots, std::uint64_t seed, std::size_t workers) {
  DecayResult out;
  Rng rng(seeding::derive(seed, "pairs"));
  const std::size_t max_attempts = 1000 * std::max<std::size_t>(pair_count, 1);
  for (std::size_t attempt = 0; out.pairs.size() < pair_count; ++attempt) {
    if (attempt == max_attempts) throw Error(ErrorKind::domain, "could not find enough far-apart root pairs");
    const auto rp = sample_two_roots(g, rng);
    if (rp.distance && *rp.distance < min_distance) continue;
    out.pairs.push_back({rp.first, rp.second, rp.distance, std::nullopt, std::nullopt});
  }
  const auto state = [&](VertexId o) -> std::optional<RootState> {
    if (!bfs_ball(g, o, H).tree) return std::nullopt;
    return root_state(g, o, H, m);
  };
  parallel_for(out.pairs.size(), workers, [&](std::size_t i) {
    out.pairs[i].first_state = state(out.pairs[i].first);
    out.pairs[i].second_state = state(out.pairs[i].second);
  });
  std::size_t both = 0, first = 0, second = 0, undecided = 0;
  for (const auto& p : out.pairs) {
    both += is_dimer(p.first_state) && is_dimer(p.second_state);
    first += is_dimer(p.first_state);
    second += is_dimer(p.second_state);
    undecided += !(is_decided(p.first_state) && is_decided(p.second_state));
  }
  const double total = static_cast<double>(std::max<std::size_t>(out.pairs.size(), 1));
  out.p11 = static_cast<double>(both) / total;
  out.p1 = static_cast<double>(first) / total;
  out.q1 = static_cast<double>(second) / total;
  out.statistic = out.p11 - out.p1 * out.q1;
  out.undecided_mass = static_cast<double>(undecided) / total;

  Rng root_rng(seeding::derive(seed, "profile-roots"));
  std::vector<VertexId> roots(profile_roots);
  for (auto& v : roots) v = static_cast<VertexId>(root_rng.below(g.vertex_count()));
  out.profile = undecided_fraction(g, profile_depths, roots, m);
  return out;
}

inline std::string state_name(const std::optional<RootState>& s) {
  return s ? std::string(to_string(*s)) : std::string("NonTreeBall");
}

inline void cmd_decay(Context& ctx) {
  const auto& r = ctx.config();
  const auto laws = parse_weights(r);
  const auto g = build_graph(r.at("model"), laws, seeding::derive(ctx.seed(), "graph"));
  const auto H = r.unsigned_or("H", 6);
  std::vector<std::size_t> depths;
  if (r.has("depths")) depths = parse_depths(r);
  else
    for (std::size_t h = 0; h <= H; ++h) depths.push_back(h);
  const auto res = decay_experiment(g, laws.vertex.minimum(), H, r.unsigned_or("pairs", 2000),
                                    r.unsigned_or("min_distance", 10), depths, r.unsigned_or("profile_roots", 2000),
                                    ctx.seed(), ctx.workers());
  std::string csv = "first,second,distance,state_o,state_o2,undecided_o,undecided_o2\n";
  for (const auto& p : res.pairs)
    csv += std::to_string(p.first) + ',' + std::to_string(p.second) + ',' +
           (p.distance ? std::to_string(*p.distance) : std::string("inf")) + ',' + state_name(p.first_state) + ',' +
           state_name(p.second_state) + ',' + (is_decided(p.first_state) ? "0" : "1") + ',' +
           (is_decided(p.second_state) ? "0" : "1") + '\n';
  ctx.write("decay.csv", csv);
  std::string prof = "H,undecided_fraction,undecided_edges,edges\n";
  bool monotone = true;
  for (std::size_t i = 0; i < res.profile.depths.size(); ++i) {
    prof += std::to_string(res.profile.depths[i]) + ',' + fmt(res.profile.fraction[i]) + ',' +
            std::to_string(res.profile.undecided[i]) + ',' + std::to_string(res.profile.edges) + '\n';
    if (i > 0 && res.profile.fraction[i] > res.profile.fraction[i - 1]) monotone = false;
  }
  ctx.write("undecided.csv", prof);
  ctx.write_json("decay_summary.json", json{{"schema_version", io::kSchemaVersion},
                                            {"H", H},
                                            {"pairs", res.pairs.size()},
                                            {"p11", res.p11},
                                            {"p1", res.p1},
                                            {"q1", res.q1},
                                            {"factorization_gap", res.statistic},
                                            {"undecided_mass", res.undecided_mass},
                                            {"bound", 0.02 + res.undecided_mass},
                                            {"within_bound", std::abs(res.statistic) <= 0.02 + res.undecided_mass},
                                            {"profile_monotone", monotone},
                                            {"profile_roots_used", res.profile.roots_used},
                                            {"profile_roots_skipped", res.profile.roots_skipped}});
}

inline void cmd_plot(Context& ctx) {
  const auto& r = ctx.config();
  const std::filesystem::path input = r.at("input").string();
  std::size_t made = 0;
  std::vector<std::string> header;
  if (std::filesystem::exists(input / "undecided.csv")) {
    const auto cols = read_numeric_csv(input / "undecided.csv", header);
    ctx.write("undecided_fraction.svg",
              svg_line_chart("Undecided root edges by depth", "H", "fraction", {{"undecided", cols[0], cols[1]}}));
    ++made;
  }
  if (std::filesystem::exists(input / "rde_diagnostics.csv")) {
    const auto cols = read_numeric_csv(input / "rde_diagnostics.csv", header);
    ctx.write("ks.svg", svg_line_chart("Lineage distance by iteration", "iteration", "KS",
                                       {{"plus vs minus", cols[0], cols[1]},
                                        {"plus, same parity", cols[0], cols[2]},
                                        {"minus, same parity", cols[0], cols[3]}}));
    ++made;
  }
  if (made == 0) Reader::fail("input", "no undecided.csv or rde_diagnostics.csv in " + input.string());
}

inline std::string fmt_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Runs one subcommand. Exit codes: 0 ok, 2 configuration error, 3 any other
/// failure. manifest.json is written in every case where the output
/// directory is usable.
inline int run(const RunOptions& options, std::ostream& err = std::cerr) {
  const auto start = std::chrono::steady_clock::now();
  json manifest{{"schema_version", io::kSchemaVersion},
                {"command", options.command},
                {"version", kVersion},
                {"workers", options.workers}};
  int code = 0;
  std::vector<std::string> artifacts;
  try {
    std::filesystem::create_directories(options.out_dir);
  } catch (const std::exception& e) {
    err << "error: cannot create output directory " << options.out_dir << ": " << e.what() << '\n';
    return 3;
  }
  try {
    if (std::find(commands().begin(), commands().end(), options.command) == commands().end())
      throw Error(ErrorKind::config, "unknown command '" + options.command + "'");
    json config = io::read_json_file(options.config_path);
    manifest["config_path"] = options.config_path;
    Context ctx(options, std::move(config));
    manifest["seed"] = ctx.seed();
    manifest["config_hash"] = fmt_hash(seeding::fnv1a(ctx.raw().dump() + "#" + std::to_string(ctx.seed())));
    try {
      if (options.command == "gen") cmd_gen(ctx);
      else if (options.command == "solve-tree") cmd_solve_tree(ctx);
      else if (options.command == "oracle") cmd_oracle(ctx);
      else if (options.command == "certify") cmd_certify(ctx);
      else if (options.command == "rde") cmd_rde(ctx);
      else if (options.command == "lln") cmd_lln(ctx);
      else if (options.command == "decay") cmd_decay(ctx);
      else cmd_plot(ctx);
    } catch (...) {
      artifacts = ctx.artifacts();
      throw;
    }
    artifacts = ctx.artifacts();
    manifest["status"] = "ok";
  } catch (const Error& e) {
    code = e.kind() == ErrorKind::config ? 2 : 3;
    manifest["status"] = "error";
    manifest["error"] = e.what();
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    code = 3;
    manifest["status"] = "error";
    manifest["error"] = e.what();
    err << "error: " << e.what() << '\n';
  }
  manifest["artifacts"] = artifacts;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    io::write_json_file((std::filesystem::path(options.out_dir) / "manifest.json").string(), manifest);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    if (code == 0) code = 3;
  }
  return code;
}

}  // namespace mdgs::experiments
