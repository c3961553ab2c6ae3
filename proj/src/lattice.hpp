#pragma once

#include <Eigen/Dense>

#include "graph.hpp"

namespace tropaj {

// Ordered lattice basis (columns of W) with its Gram--Schmidt companion data.
struct LatticeBasis {
  Eigen::MatrixXd W;
  Eigen::MatrixXd gso;  // unnormalized Gram--Schmidt vectors, columns
  Eigen::MatrixXd mu;   // lower-triangular coefficients
  bool reduced = false;

  int dim() const { return static_cast<int>(W.cols()); }
};

// Classical (unnormalized) Gram--Schmidt. Throws InvalidInput on
// rank-deficient input.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_schmidt(const Eigen::MatrixXd& W);

LatticeBasis make_basis(const Eigen::MatrixXd& W);

LatticeBasis lll_reduce(const Eigen::MatrixXd& W, double delta = 0.75);

// W * round(W^{-1} t), round-half-away-from-zero.
Eigen::VectorXd babai_round(const LatticeBasis& basis, const Eigen::VectorXd& t);

Eigen::VectorXd babai_nearest_plane(const LatticeBasis& basis, const Eigen::VectorXd& t);

struct CvpResult {
  Eigen::VectorXd vector;
  double distance = 0.0;
};

// Exact CVP by depth-first enumeration on the QR triangularization of an
// LLL-reduced basis, seeded with the Babai nearest-plane solution.
CvpResult cvp_exact(const LatticeBasis& basis, const Eigen::VectorXd& t);

// Shortest nonzero lattice vector and its length.
CvpResult svp_lambda(const LatticeBasis& basis);

// Symmetric square root via eigendecomposition.
Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& Q);

namespace detail {

// Enumeration core shared by the exact CVP path and the truncated distance
// matrix: reduced basis in QR form, reusable across many targets.
struct Enumerator {
  explicit Enumerator(const LatticeBasis& reduced_basis);

  const LatticeBasis& basis() const { return basis_; }

  // closest lattice vector to t (in ambient coordinates) and the distance
  CvpResult closest(const Eigen::VectorXd& t) const;
  // Babai candidates expressed in ambient coordinates
  Eigen::VectorXd nearest_plane(const Eigen::VectorXd& t) const;

  CvpResult shortest_nonzero() const;

 private:
  CvpResult enumerate(const Eigen::VectorXd& t, bool exclude_zero) const;

  LatticeBasis basis_;
  Eigen::MatrixXd Qfac_;  // orthogonal factor
  Eigen::MatrixXd R_;     // upper triangular, positive diagonal
};

}  // namespace detail

}  // namespace tropaj
