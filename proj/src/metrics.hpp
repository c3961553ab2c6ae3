#pragma once

#include <optional>

#include "lattice.hpp"
#include "transform.hpp"

namespace tropaj {

enum class MetricKind {
  TropExact,
  TropBabaiRound,
  TropBabaiPlane,
  TropTruncated,
  TropClosedForm,
  FosterZhang,
};

enum class TropMethod { Exact, BabaiRound, BabaiPlane };

std::string metric_kind_name(MetricKind kind);

struct DistanceMatrix {
  Eigen::MatrixXd entries;  // symmetric, zero diagonal, +inf in truncated mode
  MetricKind metric_kind = MetricKind::TropExact;
  std::optional<double> threshold;

  int size() const { return static_cast<int>(entries.rows()); }
};

// Tropical polarization distance between two points given in the fundamental
// dual basis, via CVP on the basis Q^{1/2}.
double trop_distance(const Eigen::MatrixXd& Q, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& y, TropMethod method);

DistanceMatrix trop_distmat(const TropicalTransform& tr, TropMethod method,
                            int threads = 0);

// Truncated matrix: Babai nearest-plane candidates thresholded at
// theta = |tau_1| / 2^{(g+1)/2}; finite entries are exact distances.
// tight_threshold substitutes theta = lambda(L)/2 from exact SVP.
DistanceMatrix trop_distmat_truncated(const TropicalTransform& tr,
                                      bool tight_threshold = false,
                                      int threads = 0);

// True iff Q is diagonal within 1e-12 (the cycle-decomposable case).
bool detect_diagonal(const Eigen::MatrixXd& Q);

// Closed-form distance for diagonal Q, solved coordinate-wise in O(g).
double trop_distance_diagonal(const Eigen::MatrixXd& Q, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y);

// Foster--Zhang distance in Albanese (sigma-basis) coordinates, exact via
// depth-first branch and bound on the minimax integer program.
double fz_distance(const Eigen::MatrixXi& C, const Eigen::VectorXd& albanese_x,
                   const Eigen::VectorXd& albanese_y);

DistanceMatrix fz_distmat(const TropicalTransform& tr, int threads = 0);

struct MdsResult {
  Eigen::MatrixXd coords;  // N x dim
  double residual = 0.0;   // sqrt of discarded absolute eigenvalue mass
  bool clamped_negative = false;
};

MdsResult classical_mds(const DistanceMatrix& D, int dim = 2);

std::string distmat_to_csv(const DistanceMatrix& D);
DistanceMatrix distmat_from_csv(const std::string& text);

}  // namespace tropaj
