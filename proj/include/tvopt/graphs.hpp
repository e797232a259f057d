#pragma once

// Communication topologies, their Laplacians and spectra, and piecewise-constant
// graph schedules.
//
// Nodes are 0-based in the C++ API (node 0 is the centre of a star). Text
// output meant for people prints them 1-based.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tvopt/linalg.hpp"

namespace tvopt {

enum class TopologyKind { kPath, kCycle, kStar, kComplete, kErdosRenyi, kRandomGeometric };

std::string_view to_string(TopologyKind kind);
/// Accepts "path", "cycle", "star", "complete", "erdos_renyi", "random_geometric".
TopologyKind parse_topology_kind(std::string_view name);

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  double weight = 1.0;
};

/// Undirected graph on nodes 0..n-1 with positive edge weights.
class Topology {
 public:
  /// Normalises each edge to u < v and sorts. Throws ValidationError on self-loops,
  /// out-of-range nodes, duplicate edges or non-positive weights.
  Topology(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Neighbours of `i` with the connecting edge weight, ascending by node.
  const std::vector<std::pair<int, double>>& neighbors(int i) const { return adjacency_[i]; }
  bool has_edge(int i, int j) const;
  int component_count() const;
  bool connected() const { return component_count() == 1; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

struct TopologyParams {
  std::optional<double> p;       // erdos_renyi edge probability, default 2 ln(n)/n
  std::optional<double> radius;  // random_geometric initial radius, default sqrt(2 ln(n)/(pi n))
};

/// Builds a connected topology. Random kinds retry (Erdos-Renyi: fresh draw;
/// random geometric: radius *= 1.1) up to 100 attempts, then throw GenerationError.
Topology gen_topology(TopologyKind kind, int n, const TopologyParams& params = {},
                      std::uint64_t seed = 0);

/// Weighted Laplacian: degree on the diagonal, -w_ij off it.
SymMatrix laplacian(const Topology& t);

struct SpectralInfo {
  double lambda_max = 0.0;
  double lambda_min_pos = 0.0;  // smallest nonzero Laplacian eigenvalue
  double chi = 0.0;             // lambda_max / lambda_min_pos
  double sigma_max = 0.0;       // lambda_max^2, top eigenvalue of W^2
  double sigma_min_pos = 0.0;   // lambda_min_pos^2
};

/// Eigenvalues below 1e-9 * lambda_max count as zero; more than one of them
/// means the graph is disconnected (DisconnectedGraphError).
SpectralInfo spectral_info(const Topology& t);

/// V = I - W/n.
SymMatrix mixing_matrix(const Topology& t);

struct Epoch {
  int start = 0;
  Topology topology;
};

/// Topologies held fixed between change events over iterations [0, horizon).
class GraphSchedule {
 public:
  /// Requires horizon >= 1, first start 0, strictly increasing starts below the
  /// horizon, equal node counts and connected epochs.
  GraphSchedule(int horizon, std::vector<Epoch> epochs);

  static GraphSchedule constant(int horizon, Topology t);

  int horizon() const { return horizon_; }
  int n() const { return epochs_.front().topology.n(); }
  const std::vector<Epoch>& epochs() const { return epochs_; }
  /// Epoch in force at iteration k; iterations past the horizon stay on the last epoch.
  int epoch_index(int k) const;
  const Topology& topology_at(int k) const { return epochs_[epoch_index(k)].topology; }
  /// Iterations k at which f_k differs from f_{k+1} (one before each epoch start).
  std::vector<int> change_moments() const;

 private:
  int horizon_;
  std::vector<Epoch> epochs_;
};

struct ThetaBounds {
  double theta_max = 0.0;
  double theta_min = 0.0;
};

/// Max of sigma_max and min of sigma_min_pos over the schedule's epochs.
ThetaBounds theta_bounds(const GraphSchedule& s);

struct ChangeStats {
  int m = 0;
  double alpha = 0.0;  // m / horizon
};

ChangeStats change_stats(const GraphSchedule& s);

/// sup over k in [B-1, horizon) of sigma_max(V(k) V(k-1) ... V(k-B+1) - 11^T/n).
double mixing_delta(const GraphSchedule& s, int window);

/// Two kinds alternating every `period` iterations, starting with `first`.
GraphSchedule alternating_schedule(TopologyKind first, TopologyKind second, int n, int period,
                                   int horizon, std::uint64_t seed = 0,
                                   const TopologyParams& params = {});

}  // namespace tvopt
