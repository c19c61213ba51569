#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mdgs/distributions.hpp"
#include "mdgs/error.hpp"
#include "mdgs/graph.hpp"
#include "mdgs/rde_population.hpp"

namespace mdgs::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Field lookup that reports the full path on failure.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& node() const { return node_; }
  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

  Reader at(const std::string& key) const {
    if (!node_.is_object()) fail(path_, "expected an object");
    if (!node_.contains(key)) fail(child(key), "missing required field");
    return Reader(node_.at(key), child(key));
  }

  double number() const {
    if (!node_.is_number()) fail(path_, "expected a number");
    return node_.get<double>();
  }
  std::uint64_t unsigned_integer() const {
    if (!node_.is_number_unsigned() && !(node_.is_number_integer() && node_.get<std::int64_t>() >= 0))
      fail(path_, "expected a non-negative integer");
    return node_.get<std::uint64_t>();
  }
  std::string string() const {
    if (!node_.is_string()) fail(path_, "expected a string");
    return node_.get<std::string>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) fail(path_, "expected a boolean");
    return node_.get<bool>();
  }
  std::vector<Reader> array() const {
    if (!node_.is_array()) fail(path_, "expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < node_.size(); ++i) out.emplace_back(node_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? at(key).unsigned_integer() : fallback;
  }
  std::string string_or(const std::string& key, std::string fallback) const {
    return has(key) ? at(key).string() : fallback;
  }
  bool boolean_or(const std::string& key, bool fallback) const { return has(key) ? at(key).boolean() : fallback; }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::config, path + ": " + what);
  }

  /// Runs fn and rewraps domain errors from constructors as config errors at this path.
  template <typename Fn>
  auto build(Fn&& fn) const -> decltype(fn()) {
    try {
      return fn();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::config) throw;
      fail(path_, e.what());
    }
  }

 private:
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& node_;
  std::string path_;
};

// {"type": "poisson", "c": c} | {"type": "point", "k": k} |
// {"type": "pmf", "entries": [[k, p], ...]}
inline DegreeDistribution parse_degree(const Reader& r) {
  const std::string type = r.at("type").string();
  if (type == "poisson") {
    const double c = r.at("c").number();
    return r.build([&] { return DegreeDistribution::poisson(c); });
  }
  if (type == "point") {
    const auto k = r.at("k").unsigned_integer();
    return DegreeDistribution::point(static_cast<std::size_t>(k));
  }
  if (type == "pmf") {
    std::vector<std::pair<std::size_t, double>> entries;
    for (const auto& entry : r.at("entries").array()) {
      const auto kp = entry.array();
      if (kp.size() != 2) Reader::fail(entry.path(), "entry must be [k, p]");
      entries.emplace_back(static_cast<std::size_t>(kp[0].unsigned_integer()), kp[1].number());
    }
    return r.build([&] { return DegreeDistribution::from_pmf(entries); });
  }
  Reader::fail(r.path() + ".type", "unknown degree law '" + type + "'");
}

// {"type": "exp", "rate": r} | {"type": "uniform", "lo": a, "hi": b} |
// {"type": "shifted_exp", "rate": r, "shift": s}
inline EdgeWeightDist parse_edge(const Reader& r) {
  const std::string type = r.at("type").string();
  if (type == "exp") {
    const double rate = r.at("rate").number();
    return r.build([&] { return EdgeWeightDist::exponential(rate); });
  }
  if (type == "uniform") {
    const double lo = r.at("lo").number();
    const double hi = r.at("hi").number();
    return r.build([&] { return EdgeWeightDist::uniform(lo, hi); });
  }
  if (type == "shifted_exp") {
    const double rate = r.at("rate").number();
    const double shift = r.at("shift").number();
    return r.build([&] { return EdgeWeightDist::shifted_exponential(rate, shift); });
  }
  Reader::fail(r.path() + ".type", "unknown edge-weight law '" + type + "'");
}

// {"type": "constant", "value": v} | {"type": "atom_plus_exp", "m": m, "alpha": a, "rate": r} |
// {"type": "continuous", "m": m, "tail": <edge law>}
inline VertexWeightDist parse_vertex(const Reader& r) {
  const std::string type = r.at("type").string();
  if (type == "constant") {
    const double v = r.at("value").number();
    return r.build([&] { return VertexWeightDist::constant(v); });
  }
  if (type == "atom_plus_exp") {
    const double m = r.at("m").number();
    const double alpha = r.at("alpha").number();
    const double rate = r.at("rate").number();
    return r.build([&] { return VertexWeightDist::atom_plus_exp(m, alpha, rate); });
  }
  if (type == "continuous") {
    const double m = r.at("m").number();
    EdgeWeightDist tail = parse_edge(r.at("tail"));
    return r.build([&] { return VertexWeightDist::continuous(m, tail); });
  }
  Reader::fail(r.path() + ".type", "unknown vertex-weight law '" + type + "'");
}

inline json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back(json::array({e.u, e.v, e.w}));
  return json{{"schema_version", kSchemaVersion}, {"n", g.vertex_count()}, {"x", g.vertex_weights()}, {"edges", edges}};
}

inline WeightedGraph graph_from_json(const json& j, const std::string& path = "graph") {
  const Reader r(j, path);
  const auto n = r.at("n").unsigned_integer();
  std::vector<double> x;
  if (r.has("x")) {
    for (const auto& v : r.at("x").array()) x.push_back(v.number());
    if (x.size() != n) Reader::fail(path + ".x", "length differs from n");
  } else {
    x.assign(n, 0.0);
  }
  std::vector<Edge> edges;
  for (const auto& e : r.at("edges").array()) {
    const auto parts = e.array();
    if (parts.size() != 3) Reader::fail(e.path(), "edge must be [u, v, w]");
    edges.push_back({static_cast<VertexId>(parts[0].unsigned_integer()),
                     static_cast<VertexId>(parts[1].unsigned_integer()), parts[2].number()});
  }
  return r.build([&] { return WeightedGraph(std::move(x), std::move(edges)); });
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

/// Pool export: `<stem>.bin` holds the samples as little-endian float64 in
/// pool order, `<stem>.json` the header.
inline void write_pool(const std::string& stem, const MessagePool& pool) {
  std::string bytes(pool.size() * 8, '\0');
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(pool.samples()[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
  write_text_file(stem + ".bin", bytes);
  write_json_file(stem + ".json", json{{"schema_version", kSchemaVersion},
                                       {"dtype", "float64-le"},
                                       {"count", pool.size()},
                                       {"iteration", pool.iteration()},
                                       {"parity", pool.parity() == Parity::even ? "even" : "odd"},
                                       {"provenance", pool.provenance()}});
}

inline MessagePool read_pool(const std::string& stem) {
  const json header = read_json_file(stem + ".json");
  const Reader r(header, stem + ".json");
  if (r.at("dtype").string() != "float64-le") Reader::fail(r.path() + ".dtype", "unsupported dtype");
  const auto count = r.at("count").unsigned_integer();
  std::ifstream in(stem + ".bin", std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + stem + ".bin");
  std::vector<double> samples(count);
  for (auto& s : samples) {
    unsigned char raw[8];
    if (!in.read(reinterpret_cast<char*>(raw), 8)) throw Error(ErrorKind::io, stem + ".bin is truncated");
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | raw[b];
    s = std::bit_cast<double>(bits);
  }
  const Parity parity = r.at("parity").string() == "odd" ? Parity::odd : Parity::even;
  return MessagePool(std::move(samples), r.at("iteration").unsigned_integer(), parity, r.at("provenance").string());
}

}  // namespace mdgs::io
