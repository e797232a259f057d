#include "tvopt/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <string>

#include "tvopt/error.hpp"
#include "tvopt/random.hpp"

namespace tvopt {

std::string_view to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kPath: return "path";
    case TopologyKind::kCycle: return "cycle";
    case TopologyKind::kStar: return "star";
    case TopologyKind::kComplete: return "complete";
    case TopologyKind::kErdosRenyi: return "erdos_renyi";
    case TopologyKind::kRandomGeometric: return "random_geometric";
  }
  return "unknown";
}

TopologyKind parse_topology_kind(std::string_view name) {
  for (TopologyKind k : {TopologyKind::kPath, TopologyKind::kCycle, TopologyKind::kStar,
                         TopologyKind::kComplete, TopologyKind::kErdosRenyi,
                         TopologyKind::kRandomGeometric}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown topology kind '" + std::string(name) +
                        "' (expected path, cycle, star, complete, erdos_renyi, random_geometric)");
}

Topology::Topology(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw ValidationError("Topology: need at least one node");
  for (Edge& e : edges_) {
    if (e.u == e.v) throw ValidationError("Topology: self-loop at node " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
      throw ValidationError("Topology: edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") outside [0," + std::to_string(n_) + ")");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("Topology: edge weights must be positive and finite");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v) {
      throw ValidationError("Topology: duplicate edge (" + std::to_string(edges_[k].u) + "," +
                            std::to_string(edges_[k].v) + ")");
    }
  }
  adjacency_.resize(n_);
  for (const Edge& e : edges_) {
    adjacency_[e.u].emplace_back(e.v, e.weight);
    adjacency_[e.v].emplace_back(e.u, e.weight);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool Topology::has_edge(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) return false;
  const auto& nb = adjacency_[i];
  auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(j, -1.0));
  return it != nb.end() && it->first == j;
}

int Topology::component_count() const {
  std::vector<char> seen(n_, 0);
  int components = 0;
  for (int start = 0; start < n_; ++start) {
    if (seen[start]) continue;
    ++components;
    std::queue<int> frontier;
    frontier.push(start);
    seen[start] = 1;
    while (!frontier.empty()) {
      const int i = frontier.front();
      frontier.pop();
      for (const auto& [j, w] : adjacency_[i]) {
        if (!seen[j]) {
          seen[j] = 1;
          frontier.push(j);
        }
      }
    }
  }
  return components;
}

namespace {

constexpr int kMaxGenerationAttempts = 100;

Topology deterministic_topology(TopologyKind kind, int n) {
  std::vector<Edge> edges;
  switch (kind) {
    case TopologyKind::kPath:
      for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
      break;
    case TopologyKind::kCycle:
      for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
      if (n >= 3) edges.push_back({0, n - 1});
      break;
    case TopologyKind::kStar:
      for (int i = 1; i < n; ++i) edges.push_back({0, i});
      break;
    case TopologyKind::kComplete:
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
      }
      break;
    default:
      break;
  }
  return Topology(n, std::move(edges));
}

Topology erdos_renyi(int n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.push_back({i, j});
    }
  }
  return Topology(n, std::move(edges));
}

Topology geometric(const std::vector<std::pair<double, double>>& pts, double radius) {
  const int n = static_cast<int>(pts.size());
  std::vector<Edge> edges;
  const double r2 = radius * radius;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = pts[i].first - pts[j].first;
      const double dy = pts[i].second - pts[j].second;
      if (dx * dx + dy * dy <= r2) edges.push_back({i, j});
    }
  }
  return Topology(n, std::move(edges));
}

}  // namespace

Topology gen_topology(TopologyKind kind, int n, const TopologyParams& params, std::uint64_t seed) {
  if (n < 2) throw ValidationError("gen_topology: need n >= 2");
  const double logn = std::log(static_cast<double>(n));

  if (kind == TopologyKind::kErdosRenyi) {
    const double p = params.p.value_or(std::min(1.0, 2.0 * logn / n));
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("gen_topology: erdos_renyi needs p in (0,1]");
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
      Topology t = erdos_renyi(n, p, rng);
      if (t.connected()) return t;
    }
    throw GenerationError("gen_topology: erdos_renyi(n=" + std::to_string(n) +
                          ", p=" + std::to_string(p) + ") stayed disconnected after " +
                          std::to_string(kMaxGenerationAttempts) + " attempts");
  }

  if (kind == TopologyKind::kRandomGeometric) {
    double radius = params.radius.value_or(std::sqrt(2.0 * logn / (std::numbers::pi * n)));
    if (!(radius > 0.0)) throw ValidationError("gen_topology: random_geometric needs radius > 0");
    Rng rng(seed);
    std::vector<std::pair<double, double>> pts(n);
    for (auto& [x, y] : pts) {
      x = rng.uniform();
      y = rng.uniform();
    }
    for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
      Topology t = geometric(pts, radius);
      if (t.connected()) return t;
      radius *= 1.1;
    }
    throw GenerationError("gen_topology: random_geometric(n=" + std::to_string(n) +
                          ") stayed disconnected after " +
                          std::to_string(kMaxGenerationAttempts) + " radius increases");
  }

  return deterministic_topology(kind, n);
}

SymMatrix laplacian(const Topology& t) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(t.n(), t.n());
  for (const Edge& e : t.edges()) {
    w(e.u, e.v) -= e.weight;
    w(e.v, e.u) -= e.weight;
    w(e.u, e.u) += e.weight;
    w(e.v, e.v) += e.weight;
  }
  return SymMatrix(std::move(w));
}

SpectralInfo spectral_info(const Topology& t) {
  const Spectrum s = eig_sym(laplacian(t));
  const Eigen::Index n = s.eigenvalues.size();
  const double top = s.eigenvalues(n - 1);
  const double threshold = 1e-9 * top;
  Eigen::Index zeros = 0;
  while (zeros < n && s.eigenvalues(zeros) <= threshold) ++zeros;
  if (zeros != 1 || !(top > 0.0)) {
    throw DisconnectedGraphError("spectral_info: Laplacian kernel has dimension " +
                                 std::to_string(zeros) + "; graph is not connected");
  }
  SpectralInfo info;
  info.lambda_max = top;
  info.lambda_min_pos = s.eigenvalues(1);
  info.chi = info.lambda_max / info.lambda_min_pos;
  info.sigma_max = info.lambda_max * info.lambda_max;
  info.sigma_min_pos = info.lambda_min_pos * info.lambda_min_pos;
  return info;
}

SymMatrix mixing_matrix(const Topology& t) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(t.n(), t.n()) - laplacian(t).matrix() / t.n();
  return SymMatrix(std::move(v));
}

GraphSchedule::GraphSchedule(int horizon, std::vector<Epoch> epochs)
    : horizon_(horizon), epochs_(std::move(epochs)) {
  if (horizon_ < 1) throw ValidationError("GraphSchedule: horizon must be >= 1");
  if (epochs_.empty()) throw ValidationError("GraphSchedule: no epochs");
  if (epochs_.front().start != 0) throw ValidationError("GraphSchedule: first epoch must start at 0");
  const int n = epochs_.front().topology.n();
  for (std::size_t e = 0; e < epochs_.size(); ++e) {
    const Epoch& ep = epochs_[e];
    if (e > 0 && ep.start <= epochs_[e - 1].start) {
      throw ValidationError("GraphSchedule: epoch starts must be strictly increasing");
    }
    if (ep.start >= horizon_) {
      throw ValidationError("GraphSchedule: epoch " + std::to_string(e) + " starts at " +
                            std::to_string(ep.start) + ", at or past the horizon");
    }
    if (ep.topology.n() != n) throw ValidationError("GraphSchedule: node count differs between epochs");
    if (!ep.topology.connected()) {
      throw DisconnectedGraphError("GraphSchedule: epoch " + std::to_string(e) +
                                   " (start " + std::to_string(ep.start) + ") is disconnected");
    }
  }
}

GraphSchedule GraphSchedule::constant(int horizon, Topology t) {
  std::vector<Epoch> epochs;
  epochs.push_back({0, std::move(t)});
  return GraphSchedule(horizon, std::move(epochs));
}

int GraphSchedule::epoch_index(int k) const {
  auto it = std::upper_bound(epochs_.begin(), epochs_.end(), k,
                             [](int key, const Epoch& e) { return key < e.start; });
  return it == epochs_.begin() ? 0 : static_cast<int>(it - epochs_.begin()) - 1;
}

std::vector<int> GraphSchedule::change_moments() const {
  std::vector<int> out;
  for (std::size_t e = 1; e < epochs_.size(); ++e) out.push_back(epochs_[e].start - 1);
  return out;
}

ThetaBounds theta_bounds(const GraphSchedule& s) {
  ThetaBounds tb;
  bool first = true;
  for (const Epoch& e : s.epochs()) {
    const SpectralInfo info = spectral_info(e.topology);
    if (first) {
      tb.theta_max = info.sigma_max;
      tb.theta_min = info.sigma_min_pos;
      first = false;
    } else {
      tb.theta_max = std::max(tb.theta_max, info.sigma_max);
      tb.theta_min = std::min(tb.theta_min, info.sigma_min_pos);
    }
  }
  return tb;
}

ChangeStats change_stats(const GraphSchedule& s) {
  ChangeStats cs;
  cs.m = static_cast<int>(s.epochs().size()) - 1;
  cs.alpha = static_cast<double>(cs.m) / s.horizon();
  return cs;
}

double mixing_delta(const GraphSchedule& s, int window) {
  if (window < 1) throw ValidationError("mixing_delta: window must be >= 1");
  if (s.horizon() < window) throw ValidationError("mixing_delta: horizon shorter than window");
  const int n = s.n();
  const Eigen::MatrixXd averaging = Eigen::MatrixXd::Constant(n, n, 1.0 / n);

  std::vector<Eigen::MatrixXd> v;
  v.reserve(s.epochs().size());
  for (const Epoch& e : s.epochs()) v.push_back(mixing_matrix(e.topology).matrix());

  // Windows that see the same epoch sequence share a product.
  std::map<std::vector<int>, double> cache;
  double delta = 0.0;
  for (int k = window - 1; k < s.horizon(); ++k) {
    std::vector<int> key(window);
    for (int b = 0; b < window; ++b) key[b] = s.epoch_index(k - b);
    auto it = cache.find(key);
    if (it == cache.end()) {
      Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(n, n);
      for (int b = 0; b < window; ++b) prod = prod * v[key[b]];
      it = cache.emplace(key, operator_norm(prod - averaging)).first;
    }
    delta = std::max(delta, it->second);
  }
  return delta;
}

GraphSchedule alternating_schedule(TopologyKind first, TopologyKind second, int n, int period,
                                   int horizon, std::uint64_t seed, const TopologyParams& params) {
  if (period < 1) throw ValidationError("alternating_schedule: period must be >= 1");
  std::vector<Epoch> epochs;
  int index = 0;
  for (int start = 0; start < horizon; start += period, ++index) {
    const TopologyKind kind = index % 2 == 0 ? first : second;
    epochs.push_back({start, gen_topology(kind, n, params, derive_seed(seed, Stream::kGraph, index))});
  }
  return GraphSchedule(horizon, std::move(epochs));
}

}  // namespace tvopt
