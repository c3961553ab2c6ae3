#include "transform.hpp"

#include <json.hpp>

namespace tropaj {

namespace {

// decomposition column of each original edge index
std::vector<int> edge_positions(const SpanningDecomposition& dec) {
  std::vector<int> pos(dec.model.edge_count());
  for (int c = 0; c < dec.model.edge_count(); ++c) pos[dec.edge_order[c]] = c;
  return pos;
}

}  // namespace

Eigen::MatrixXi cycle_edge_matrix(const SpanningDecomposition& dec) {
  const int g = dec.genus();
  const int m = dec.model.edge_count();
  const int nt = dec.tree_size();
  auto pos = edge_positions(dec);
  Eigen::MatrixXi C = Eigen::MatrixXi::Zero(g, m);

  // climb from v to its ancestor anc; sign +1 when the tree edge is
  // traversed tail->head in the climb direction, flipped for the
  // descending half of the cycle
  auto climb = [&](int i, int v, int anc, int flip) {
    while (v != anc) {
      int pe = dec.parent_edge[v];
      int s = dec.model.edges[pe].tail == v ? 1 : -1;
      C(i, pos[pe]) = s * flip;
      v = dec.parent[v];
    }
  };

  for (int i = 0; i < g; ++i) {
    const Edge& e = dec.model.edges[dec.edge_order[nt + i]];
    C(i, nt + i) = 1;
    if (e.tail == e.head) continue;
    int a = dec.lca(e.head, e.tail);
    climb(i, e.head, a, 1);
    climb(i, e.tail, a, -1);
  }
  return C;
}

Eigen::MatrixXi path_edge_matrix(const SpanningDecomposition& dec) {
  const int n = dec.model.n_vertices;
  const int nt = dec.tree_size();
  auto pos = edge_positions(dec);
  Eigen::MatrixXi Y = Eigen::MatrixXi::Zero(n, nt);
  for (int v = 0; v < n; ++v) {
    int w = v;
    while (w != dec.root) {
      int pe = dec.parent_edge[w];
      // path runs root->v, so the edge is traversed parent->w
      Y(v, pos[pe]) = dec.model.edges[pe].head == w ? 1 : -1;
      w = dec.parent[w];
    }
  }
  return Y;
}

TropicalTransform abel_jacobi(const SpanningDecomposition& dec) {
  const int g = dec.genus();
  if (g < 1) throw InvalidInput("genus-0 graph has no Jacobian coordinates");
  const int m = dec.model.edge_count();
  const int nt = dec.tree_size();

  TropicalTransform tr;
  tr.genus = g;
  tr.C = cycle_edge_matrix(dec);
  tr.edge_order = dec.edge_order;
  tr.lengths.resize(m);
  for (int c = 0; c < m; ++c) tr.lengths[c] = dec.model.edges[dec.edge_order[c]].length;

  Eigen::MatrixXd Cst = tr.C.leftCols(nt).cast<double>();
  Eigen::MatrixXd Lst = tr.lengths.head(nt).asDiagonal();
  Eigen::MatrixXd Y = path_edge_matrix(dec).cast<double>();
  tr.V = Cst * Lst * Y.transpose();
  tr.Q = Cst * Lst * Cst.transpose();
  tr.Q += Eigen::MatrixXd(tr.lengths.tail(g).asDiagonal());

  tr.point_meta.resize(dec.model.n_vertices);
  for (int v = 0; v < dec.model.n_vertices; ++v)
    tr.point_meta[v] = {PointMeta::Kind::Vertex, v, -1, 0.0};
  return tr;
}

TropicalTransform interpolate(const TropicalTransform& tr,
                              const SpanningDecomposition& dec, int kappa) {
  if (kappa < 1) throw InvalidInput("sampling ratio kappa must be >= 1");
  const int g = tr.genus;
  const int m = dec.model.edge_count();
  const int nt = dec.tree_size();
  const int n0 = tr.point_count();

  TropicalTransform out = tr;
  out.V.conservativeResize(g, n0 + kappa * m);
  int col = n0;
  for (int c = 0; c < m; ++c) {
    const int ej = dec.edge_order[c];
    const Edge& e = dec.model.edges[ej];
    for (int i = 1; i <= kappa; ++i) {
      double theta = static_cast<double>(i) / (kappa + 1);
      if (c < nt) {
        out.V.col(col) = (1.0 - theta) * tr.V.col(e.tail) + theta * tr.V.col(e.head);
      } else {
        out.V.col(col) = tr.V.col(e.tail);
        out.V(c - nt, col) += theta * e.length;
      }
      out.point_meta.push_back({PointMeta::Kind::Interior, -1, ej, theta});
      ++col;
    }
  }
  return out;
}

ProjectionData projection_data(const TropicalTransform& tr) {
  if (tr.genus < 1) throw InvalidInput("genus must be >= 1");
  Eigen::MatrixXd Cd = tr.C.cast<double>();
  Eigen::LDLT<Eigen::MatrixXd> solver(tr.Q);
  if (solver.info() != Eigen::Success)
    throw NumericError("period matrix is numerically singular");
  ProjectionData pd;
  pd.Pi = solver.solve(Cd * tr.lengths.asDiagonal());
  pd.Pi_tilde = pd.Pi.transpose() * Cd;
  pd.foster = pd.Pi_tilde.cwiseAbs().rowwise().maxCoeff();
  return pd;
}

Eigen::MatrixXd albanese_coordinates(const TropicalTransform& tr) {
  Eigen::LDLT<Eigen::MatrixXd> solver(tr.Q);
  if (solver.info() != Eigen::Success)
    throw NumericError("period matrix is numerically singular");
  return solver.solve(tr.V);
}

std::string serialize_transform(const TropicalTransform& tr) {
  nlohmann::json doc;
  doc["genus"] = tr.genus;
  auto mat = [](const auto& M) {
    auto rows = nlohmann::json::array();
    for (int i = 0; i < M.rows(); ++i) {
      auto row = nlohmann::json::array();
      for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  doc["Q"] = mat(tr.Q);
  doc["C"] = mat(tr.C);
  auto lens = nlohmann::json::array();
  for (int j = 0; j < tr.lengths.size(); ++j) lens.push_back(tr.lengths[j]);
  doc["lengths"] = std::move(lens);
  auto points = nlohmann::json::array();
  for (int c = 0; c < tr.point_count(); ++c) {
    nlohmann::json p;
    p["id"] = c;
    auto coords = nlohmann::json::array();
    for (int i = 0; i < tr.genus; ++i) coords.push_back(tr.V(i, c));
    p["coords"] = std::move(coords);
    const PointMeta& meta = tr.point_meta[c];
    if (meta.kind == PointMeta::Kind::Vertex)
      p["source"] = {{"kind", "vertex"}, {"index", meta.vertex}};
    else
      p["source"] = {{"kind", "interior"}, {"edge", meta.edge}, {"theta", meta.theta}};
    points.push_back(std::move(p));
  }
  doc["points"] = std::move(points);
  return doc.dump(2);
}

TropicalTransform parse_transform(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed transform document: ") + e.what());
  }
  TropicalTransform tr;
  try {
    tr.genus = doc.at("genus").get<int>();
    const auto& Q = doc.at("Q");
    const auto& C = doc.at("C");
    const auto& lens = doc.at("lengths");
    const int g = tr.genus;
    const int m = static_cast<int>(lens.size());
    tr.Q.resize(g, g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) tr.Q(i, j) = Q.at(i).at(j).get<double>();
    tr.C.resize(g, m);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < m; ++j) tr.C(i, j) = C.at(i).at(j).get<int>();
    tr.lengths.resize(m);
    for (int j = 0; j < m; ++j) tr.lengths[j] = lens.at(j).get<double>();
    tr.edge_order.resize(m);
    for (int j = 0; j < m; ++j) tr.edge_order[j] = j;
    const auto& points = doc.at("points");
    const int N = static_cast<int>(points.size());
    tr.V.resize(g, N);
    for (int c = 0; c < N; ++c) {
      const auto& p = points.at(c);
      for (int i = 0; i < g; ++i) tr.V(i, c) = p.at("coords").at(i).get<double>();
      const auto& src = p.at("source");
      PointMeta meta;
      if (src.at("kind").get<std::string>() == "vertex") {
        meta = {PointMeta::Kind::Vertex, src.at("index").get<int>(), -1, 0.0};
      } else {
        meta = {PointMeta::Kind::Interior, -1, src.at("edge").get<int>(),
                src.at("theta").get<double>()};
      }
      tr.point_meta.push_back(meta);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("invalid transform document: ") + e.what());
  }
  return tr;
}

}  // namespace tropaj
