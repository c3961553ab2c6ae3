#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <random>

#include <json.hpp>

namespace tropaj {

namespace {

// adjacency[v] = list of (edge index, other endpoint)
std::vector<std::vector<std::pair<int, int>>> adjacency(const MetricGraphModel& m) {
  std::vector<std::vector<std::pair<int, int>>> adj(m.n_vertices);
  for (int j = 0; j < m.edge_count(); ++j) {
    const Edge& e = m.edges[j];
    adj[e.tail].push_back({j, e.head});
    if (e.tail != e.head) adj[e.head].push_back({j, e.tail});
  }
  return adj;
}

bool connected(const MetricGraphModel& m) {
  if (m.n_vertices == 0) return false;
  auto adj = adjacency(m);
  std::vector<char> seen(m.n_vertices, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [ej, w] : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == m.n_vertices;
}

}  // namespace

void MetricGraphModel::validate() const {
  if (n_vertices < 1) throw InvalidInput("graph must have at least one vertex");
  for (const Edge& e : edges) {
    if (e.tail < 0 || e.tail >= n_vertices || e.head < 0 || e.head >= n_vertices)
      throw InvalidInput("edge endpoint index out of range");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw InvalidInput("edge length must be positive and finite");
  }
  if (!connected(*this)) throw InvalidInput("graph is not connected");
}

MetricGraphModel parse_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed graph document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
    throw InvalidInput("graph document needs \"vertices\" and \"edges\"");
  MetricGraphModel model;
  if (!doc["vertices"].is_number_integer())
    throw InvalidInput("\"vertices\" must be an integer");
  model.n_vertices = doc["vertices"].get<int>();
  if (!doc["edges"].is_array()) throw InvalidInput("\"edges\" must be an array");
  for (const auto& item : doc["edges"]) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() ||
        !item[1].is_number_integer() || !item[2].is_number())
      throw InvalidInput("each edge must be [tail, head, length]");
    model.edges.push_back({item[0].get<int>(), item[1].get<int>(), item[2].get<double>()});
  }
  model.validate();
  return model;
}

std::string serialize_graph(const MetricGraphModel& model) {
  nlohmann::json doc;
  doc["vertices"] = model.n_vertices;
  auto edges = nlohmann::json::array();
  for (const Edge& e : model.edges)
    edges.push_back(nlohmann::json::array({e.tail, e.head, e.length}));
  doc["edges"] = std::move(edges);
  return doc.dump(2);
}

std::set<int> find_bridges(const MetricGraphModel& model) {
  model.validate();
  const int n = model.n_vertices;
  auto adj = adjacency(model);
  std::vector<int> disc(n, -1), low(n, 0);
  std::set<int> bridges;
  int timer = 0;
  // iterative Tarjan; parallel edges are distinguished by edge index, so a
  // doubled edge is never reported
  struct Frame {
    int v;
    int in_edge;
    size_t it;
  };
  std::vector<Frame> stack;
  stack.push_back({0, -1, 0});
  disc[0] = low[0] = timer++;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.it < adj[f.v].size()) {
      auto [ej, w] = adj[f.v][f.it++];
      if (ej == f.in_edge || w == f.v) continue;  // entering edge / self-loop
      if (disc[w] == -1) {
        disc[w] = low[w] = timer++;
        stack.push_back({w, ej, 0});
      } else {
        low[f.v] = std::min(low[f.v], disc[w]);
      }
    } else {
      int v = f.v;
      int in_edge = f.in_edge;
      stack.pop_back();
      if (!stack.empty()) {
        int p = stack.back().v;
        low[p] = std::min(low[p], low[v]);
        if (low[v] > disc[p]) bridges.insert(in_edge);
      }
    }
  }
  return bridges;
}

MetricGraphModel simplify(const MetricGraphModel& model) {
  model.validate();
  if (model.genus() < 1)
    throw InvalidInput("cannot simplify a genus-0 graph: its Jacobian is a point");

  // contract bridges via union-find on vertices
  std::set<int> bridges = find_bridges(model);
  std::vector<int> rep(model.n_vertices);
  std::iota(rep.begin(), rep.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (rep[v] != v) v = rep[v] = rep[rep[v]];
    return v;
  };
  for (int b : bridges) {
    int u = find(model.edges[b].tail);
    int v = find(model.edges[b].head);
    if (u != v) rep[std::max(u, v)] = std::min(u, v);
  }
  std::vector<int> new_index(model.n_vertices, -1);
  int n = 0;
  for (int v = 0; v < model.n_vertices; ++v)
    if (find(v) == v) new_index[v] = n++;
  std::vector<Edge> edges;
  for (int j = 0; j < model.edge_count(); ++j) {
    if (bridges.count(j)) continue;
    const Edge& e = model.edges[j];
    edges.push_back({new_index[find(e.tail)], new_index[find(e.head)], e.length});
  }

  // merge across valence-2 vertices; a lone self-loop keeps its vertex
  // (genus-1 minimal model)
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::pair<int, int>>> inc(n);  // (edge, end: 0=tail 1=head)
    for (int j = 0; j < static_cast<int>(edges.size()); ++j) {
      inc[edges[j].tail].push_back({j, 0});
      inc[edges[j].head].push_back({j, 1});
    }
    for (int v = 0; v < n && !changed; ++v) {
      if (inc[v].size() != 2) continue;
      auto [j1, end1] = inc[v][0];
      auto [j2, end2] = inc[v][1];
      if (j1 == j2) continue;  // self-loop at v, retained
      // new edge runs from the far endpoint of j1 to the far endpoint of j2
      int a = end1 == 0 ? edges[j1].head : edges[j1].tail;
      int b = end2 == 0 ? edges[j2].head : edges[j2].tail;
      double len = edges[j1].length + edges[j2].length;
      edges[j1] = {a, b, len};
      edges.erase(edges.begin() + j2);
      // drop v, compact indices
      for (Edge& e : edges) {
        if (e.tail > v) --e.tail;
        if (e.head > v) --e.head;
      }
      --n;
      changed = true;
    }
  }

  MetricGraphModel out;
  out.n_vertices = n;
  out.edges = std::move(edges);
  out.validate();
  return out;
}

SpanningDecomposition spanning_decomposition(const MetricGraphModel& model, int root) {
  model.validate();
  if (root < 0 || root >= model.n_vertices) throw InvalidInput("root out of range");
  const int n = model.n_vertices;
  auto adj = adjacency(model);

  SpanningDecomposition dec;
  dec.model = model;
  dec.root = root;
  dec.parent_edge.assign(n, -1);
  dec.parent.assign(n, -1);
  dec.depth.assign(n, 0);

  std::vector<char> in_tree(model.edge_count(), 0);
  std::vector<char> seen(n, 0);
  std::vector<int> tree_edges;
  std::queue<int> q;
  q.push(root);
  seen[root] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    // incident edges in increasing edge-index order for determinism
    auto edges_here = adj[v];
    std::sort(edges_here.begin(), edges_here.end());
    for (auto [ej, w] : edges_here) {
      if (seen[w]) continue;
      seen[w] = 1;
      in_tree[ej] = 1;
      tree_edges.push_back(ej);
      dec.parent[w] = v;
      dec.parent_edge[w] = ej;
      dec.depth[w] = dec.depth[v] + 1;
      q.push(w);
    }
  }

  dec.edge_order = tree_edges;
  for (int j = 0; j < model.edge_count(); ++j)
    if (!in_tree[j]) dec.edge_order.push_back(j);

  int levels = 1;
  while ((1 << levels) < std::max(n, 2)) ++levels;
  dec.ancestor_table.assign(levels, std::vector<int>(n, -1));
  dec.ancestor_table[0] = dec.parent;
  for (int k = 1; k < levels; ++k)
    for (int v = 0; v < n; ++v) {
      int mid = dec.ancestor_table[k - 1][v];
      dec.ancestor_table[k][v] = mid < 0 ? -1 : dec.ancestor_table[k - 1][mid];
    }
  return dec;
}

int SpanningDecomposition::lca(int u, int v) const {
  const int levels = static_cast<int>(ancestor_table.size());
  if (depth[u] < depth[v]) std::swap(u, v);
  int diff = depth[u] - depth[v];
  for (int k = 0; k < levels; ++k)
    if (diff & (1 << k)) u = ancestor_table[k][u];
  if (u == v) return u;
  for (int k = levels - 1; k >= 0; --k)
    if (ancestor_table[k][u] != ancestor_table[k][v]) {
      u = ancestor_table[k][u];
      v = ancestor_table[k][v];
    }
  return parent[u];
}

std::vector<std::vector<int>> boundary_matrix(const MetricGraphModel& model) {
  model.validate();
  std::vector<std::vector<int>> A(model.edge_count(), std::vector<int>(model.n_vertices, 0));
  for (int j = 0; j < model.edge_count(); ++j) {
    A[j][model.edges[j].head] += 1;
    A[j][model.edges[j].tail] -= 1;
  }
  return A;
}

MetricGraphModel gen_random(int n, int genus, std::uint64_t seed,
                            double len_min, double len_max) {
  if (n < 1 || genus < 0) throw InvalidInput("need n >= 1 and genus >= 0");
  if (!(len_min > 0.0) || !(len_max >= len_min))
    throw InvalidInput("length range must satisfy 0 < min <= max");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len(len_min, len_max);
  MetricGraphModel model;
  model.n_vertices = n;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    model.edges.push_back({pick(rng), v, len(rng)});
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  for (int i = 0; i < genus; ++i)
    model.edges.push_back({any(rng), any(rng), len(rng)});
  return model;
}

}  // namespace tropaj
