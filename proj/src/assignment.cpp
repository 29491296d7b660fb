#include "omkd/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace omkd::flow {

namespace {

struct Edge {
  int from = 0;
  int to = 0;
  int cap = 0;
  int flow = 0;
  double cost = 0.0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

AssignmentResult solve_b_matching(const std::vector<std::vector<std::optional<double>>>& reward,
                                  const std::vector<int>& cap) {
  const int n_req = static_cast<int>(reward.size());
  const int n_res = static_cast<int>(cap.size());
  for (const auto& row : reward) {
    if (static_cast<int>(row.size()) != n_res)
      throw std::invalid_argument("reward matrix must have one column per resource");
  }

  // Nodes: source, requests, resources, sink.
  const int s = 0;
  const int t = 1 + n_req + n_res;
  const int num_nodes = t + 1;
  auto req_node = [&](int n) { return 1 + n; };
  auto res_node = [&](int k) { return 1 + n_req + k; };

  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj(num_nodes);
  auto add_edge = [&](int from, int to, int capacity, double cost) {
    adj[from].push_back(static_cast<int>(edges.size()));
    edges.push_back({from, to, capacity, 0, cost});
    adj[to].push_back(static_cast<int>(edges.size()));
    edges.push_back({to, from, 0, 0, -cost});
  };

  std::vector<std::vector<int>> edge_id(n_req, std::vector<int>(n_res, -1));
  for (int n = 0; n < n_req; ++n) add_edge(s, req_node(n), 1, 0.0);
  for (int n = 0; n < n_req; ++n) {
    for (int k = 0; k < n_res; ++k) {
      if (reward[n][k]) {
        edge_id[n][k] = static_cast<int>(edges.size());
        add_edge(req_node(n), res_node(k), 1, -*reward[n][k]);
      }
    }
  }
  for (int k = 0; k < n_res; ++k) {
    if (cap[k] < 0) throw std::invalid_argument("resource capacity must be >= 0");
    add_edge(res_node(k), t, cap[k], 0.0);
  }

  // Bellman-Ford shortest path; edge order is fixed, ties keep the first
  // predecessor found, so the augmenting path choice is deterministic.
  std::vector<double> dist(num_nodes);
  std::vector<int> prev_edge(num_nodes);
  auto shortest_path = [&]() {
    dist.assign(num_nodes, kInf);
    prev_edge.assign(num_nodes, -1);
    dist[s] = 0.0;
    for (int pass = 0; pass < num_nodes - 1; ++pass) {
      bool relaxed = false;
      for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const Edge& edge = edges[e];
        if (edge.cap - edge.flow <= 0 || dist[edge.from] == kInf) continue;
        const double candidate = dist[edge.from] + edge.cost;
        if (candidate < dist[edge.to]) {
          dist[edge.to] = candidate;
          prev_edge[edge.to] = e;
          relaxed = true;
        }
      }
      if (!relaxed) break;
    }
  };

  int total_flow = 0;
  while (true) {
    shortest_path();
    if (!(dist[t] < 0.0)) break;  // no profitable augmenting path left
    for (int v = t; v != s;) {
      Edge& edge = edges[prev_edge[v]];
      edge.flow += 1;
      edges[prev_edge[v] ^ 1].flow -= 1;
      v = edge.from;
    }
    ++total_flow;
  }

  AssignmentResult result;
  result.match.assign(n_req, -1);
  result.u.assign(n_req, 0.0);
  result.h.assign(n_res, 0.0);
  for (int n = 0; n < n_req; ++n) {
    for (int k = 0; k < n_res; ++k) {
      if (edge_id[n][k] >= 0 && edges[edge_id[n][k]].flow > 0) {
        result.match[n] = k;
        result.value += *reward[n][k];
      }
    }
  }

  // Optimality potentials of the final residual graph, computed as
  // shortest distances from a virtual source connected to every node.
  // The circulation arc t->s (and its reverse while flow is positive)
  // ties the source and sink potentials together; the residual graph of
  // an optimal flow has no negative cycle, so this converges.
  std::vector<double> pot(num_nodes, 0.0);
  bool relaxed = true;
  for (int pass = 0; relaxed && pass <= num_nodes + 1; ++pass) {
    relaxed = false;
    for (const Edge& edge : edges) {
      if (edge.cap - edge.flow <= 0) continue;
      if (pot[edge.from] + edge.cost < pot[edge.to]) {
        pot[edge.to] = pot[edge.from] + edge.cost;
        relaxed = true;
      }
    }
    if (pot[t] < pot[s]) {
      pot[s] = pot[t];
      relaxed = true;
    }
    if (total_flow > 0 && pot[s] < pot[t]) {
      pot[t] = pot[s];
      relaxed = true;
    }
  }
  if (relaxed)
    throw std::logic_error("solve_b_matching: residual graph has a negative cycle");

  // LP duals: u_n from the source-edge potential gap plus the reduced
  // cost of n's saturated assignment edge, h_k from the sink-edge gap.
  // Complementary slackness follows from the residual-edge conditions.
  const double base = pot[s];
  for (int n = 0; n < n_req; ++n) {
    const double phi_n = pot[req_node(n)] - base;
    result.u[n] = std::max(0.0, phi_n);
    const int k = result.match[n];
    if (k >= 0) {
      const double phi_k = pot[res_node(k)] - base;
      result.u[n] += std::max(0.0, *reward[n][k] - phi_n + phi_k);
    }
  }
  for (int k = 0; k < n_res; ++k) {
    result.h[k] = std::max(0.0, (pot[t] - base) - (pot[res_node(k)] - base));
  }
  return result;
}

}  // namespace omkd::flow
