#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropaj {

// Input data is rejected with InvalidInput; internal numerical failures
// (singular period matrix etc.) raise NumericError.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int tail = 0;
  int head = 0;
  double length = 0.0;
};

// Weighted directed multigraph. Self-loops and parallel edges are allowed;
// orientation is bookkeeping only and never affects transform outputs.
struct MetricGraphModel {
  int n_vertices = 0;
  std::vector<Edge> edges;

  int edge_count() const { return static_cast<int>(edges.size()); }
  int genus() const { return edge_count() - n_vertices + 1; }

  // Throws InvalidInput unless indices are in range, lengths positive and
  // finite, and the underlying undirected graph is connected.
  void validate() const;
};

// Rooted spanning tree with the edge permutation used throughout the
// transform: tree edges first (BFS discovery order), then the g
// cycle-defining edges in input order.
struct SpanningDecomposition {
  MetricGraphModel model;
  std::vector<int> edge_order;   // permutation of edge indices
  int root = 0;
  std::vector<int> parent_edge;  // original edge index, -1 at root
  std::vector<int> parent;       // parent vertex, -1 at root
  std::vector<int> depth;
  // ancestor_table[k][v] = 2^k-step ancestor of v (-1 past the root)
  std::vector<std::vector<int>> ancestor_table;

  int genus() const { return model.genus(); }
  int tree_size() const { return model.n_vertices - 1; }
  int lca(int u, int v) const;
};

MetricGraphModel parse_graph(const std::string& text);
std::string serialize_graph(const MetricGraphModel& model);

std::set<int> find_bridges(const MetricGraphModel& model);

// Contracts bridges and merges valence-2 vertices (Tarjan + chain merging).
// Requires genus >= 1; genus and total non-bridge length are preserved.
MetricGraphModel simplify(const MetricGraphModel& model);

SpanningDecomposition spanning_decomposition(const MetricGraphModel& model, int root);

// m x n boundary matrix: row j has +1 at head(e_j), -1 at tail(e_j).
std::vector<std::vector<int>> boundary_matrix(const MetricGraphModel& model);

MetricGraphModel gen_random(int n, int genus, std::uint64_t seed,
                            double len_min, double len_max);

}  // namespace tropaj
