#pragma once

#include <Eigen/Dense>

#include "graph.hpp"

namespace tropaj {

struct PointMeta {
  enum class Kind { Vertex, Interior };
  Kind kind = Kind::Vertex;
  int vertex = -1;  // Vertex
  int edge = -1;    // Interior: original edge index
  double theta = 0.0;
};

// Tropical Abel--Jacobi transform of a combinatorial model. Columns of V are
// point coordinates in the fundamental dual basis; columns of Q generate the
// period lattice. C and lengths are stored in decomposition edge order
// (tree edges first, then cycle-defining edges).
struct TropicalTransform {
  int genus = 0;
  Eigen::MatrixXd V;       // g x N
  Eigen::MatrixXd Q;       // g x g
  Eigen::MatrixXi C;       // g x m, entries in {-1,0,1}
  Eigen::VectorXd lengths; // m, decomposition order
  std::vector<int> edge_order;  // decomposition column -> original edge index
  std::vector<PointMeta> point_meta;

  int point_count() const { return static_cast<int>(V.cols()); }
  int edge_count() const { return static_cast<int>(lengths.size()); }
};

struct ProjectionData {
  Eigen::MatrixXd Pi;        // g x m, Q^{-1} C L
  Eigen::MatrixXd Pi_tilde;  // m x m, Pi^T C
  Eigen::VectorXd foster;    // per edge, decomposition order
};

// Fundamental cycle--edge incidence matrix, g x m, columns in decomposition
// order; the non-tree block is the g x g identity.
Eigen::MatrixXi cycle_edge_matrix(const SpanningDecomposition& dec);

// Path--edge incidence matrix Y_ST, n x (n-1): row i is the tree path from
// the root to vertex i.
Eigen::MatrixXi path_edge_matrix(const SpanningDecomposition& dec);

TropicalTransform abel_jacobi(const SpanningDecomposition& dec);

// Appends kappa equally spaced interior points per edge (theta = i/(kappa+1)).
TropicalTransform interpolate(const TropicalTransform& tr,
                              const SpanningDecomposition& dec, int kappa);

ProjectionData projection_data(const TropicalTransform& tr);

// Point coordinates in the 1-cycle basis: Q^{-1} V.
Eigen::MatrixXd albanese_coordinates(const TropicalTransform& tr);

std::string serialize_transform(const TropicalTransform& tr);
TropicalTransform parse_transform(const std::string& text);

}  // namespace tropaj
