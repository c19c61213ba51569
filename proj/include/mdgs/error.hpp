#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdgs {

/// Failure categories shared by every module. The CLI maps `config` to exit
/// code 2 and everything else to exit code 3.
enum class ErrorKind {
  config,
  zero_mean,
  domain,
  degenerate_generating_function,
  vertex_out_of_range,
  invalid_graph,
  invalid_config,
  not_a_tree,
  boundary_incomplete,
  too_large,
  cycle_rank_exceeded,
  ball_not_tree,
  empty_pool,
  atom_mismatch,
  size_cap_exceeded,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "ConfigError";
    case ErrorKind::zero_mean: return "ZeroMean";
    case ErrorKind::domain: return "DomainError";
    case ErrorKind::degenerate_generating_function: return "DegenerateGeneratingFunction";
    case ErrorKind::vertex_out_of_range: return "VertexOutOfRange";
    case ErrorKind::invalid_graph: return "InvalidGraph";
    case ErrorKind::invalid_config: return "InvalidConfig";
    case ErrorKind::not_a_tree: return "NotATree";
    case ErrorKind::boundary_incomplete: return "BoundaryIncomplete";
    case ErrorKind::too_large: return "TooLarge";
    case ErrorKind::cycle_rank_exceeded: return "CycleRankExceeded";
    case ErrorKind::ball_not_tree: return "BallNotTree";
    case ErrorKind::empty_pool: return "EmptyPool";
    case ErrorKind::atom_mismatch: return "AtomMismatch";
    case ErrorKind::size_cap_exceeded: return "SizeCapExceeded";
    case ErrorKind::io: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mdgs
