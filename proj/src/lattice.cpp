#include "lattice.hpp"

#include <cmath>
#include <functional>

namespace tropaj {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_schmidt(const Eigen::MatrixXd& W) {
  const int g = static_cast<int>(W.cols());
  Eigen::MatrixXd gso = W;
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(g, g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < i; ++j) {
      double denom = gso.col(j).squaredNorm();
      mu(i, j) = W.col(i).dot(gso.col(j)) / denom;
      gso.col(i) -= mu(i, j) * gso.col(j);
    }
    mu(i, i) = 1.0;
    if (gso.col(i).squaredNorm() < 1e-24 * (1.0 + W.col(i).squaredNorm()))
      throw InvalidInput("basis matrix is rank-deficient");
  }
  return {gso, mu};
}

LatticeBasis make_basis(const Eigen::MatrixXd& W) {
  LatticeBasis basis;
  basis.W = W;
  std::tie(basis.gso, basis.mu) = gram_schmidt(W);
  return basis;
}

namespace {

// one size-reduce + swap sweep; returns true if the basis was modified
bool lll_pass(Eigen::MatrixXd& W, double delta) {
  const int g = static_cast<int>(W.cols());
  auto [gso, mu] = gram_schmidt(W);
  Eigen::VectorXd B(g);
  for (int i = 0; i < g; ++i) B[i] = gso.col(i).squaredNorm();

  bool modified = false;
  int k = 1;
  while (k < g) {
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(mu(k, j));
      if (q != 0.0) {
        W.col(k) -= q * W.col(j);
        for (int r = 0; r < j; ++r) mu(k, r) -= q * mu(j, r);
        mu(k, j) -= q;
        modified = true;
      }
    }
    if (B[k] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * B[k - 1]) {
      ++k;
    } else {
      W.col(k).swap(W.col(k - 1));
      double m = mu(k, k - 1);
      double Bk = B[k] + m * m * B[k - 1];
      mu(k, k - 1) = m * B[k - 1] / Bk;
      B[k] = B[k - 1] * B[k] / Bk;
      B[k - 1] = Bk;
      for (int r = 0; r < k - 1; ++r) std::swap(mu(k, r), mu(k - 1, r));
      for (int i = k + 1; i < g; ++i) {
        double t = mu(i, k);
        mu(i, k) = mu(i, k - 1) - m * t;
        mu(i, k - 1) = t + mu(k, k - 1) * mu(i, k);
      }
      modified = true;
      k = std::max(k - 1, 1);
    }
  }
  return modified;
}

bool lll_conditions_hold(const LatticeBasis& b, double delta, double tol) {
  const int g = b.dim();
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(b.mu(i, j)) > 0.5 + tol) return false;
  for (int j = 0; j + 1 < g; ++j) {
    double lhs = b.gso.col(j + 1).squaredNorm();
    double rhs = (delta - b.mu(j + 1, j) * b.mu(j + 1, j)) * b.gso.col(j).squaredNorm();
    if (lhs < rhs - tol * (1.0 + rhs)) return false;
  }
  return true;
}

double round_half_away(double x) { return std::round(x); }

}  // namespace

LatticeBasis lll_reduce(const Eigen::MatrixXd& W, double delta) {
  if (W.rows() != W.cols()) throw InvalidInput("basis matrix must be square");
  if (!(delta > 0.25 && delta < 1.0)) throw InvalidInput("delta must lie in (1/4, 1)");
  Eigen::MatrixXd out = W;
  // floating-point mu updates can drift on large bases; repeat with a fresh
  // orthogonalization until the pass makes no change
  for (int pass = 0; pass < 32; ++pass) {
    bool modified = lll_pass(out, delta);
    LatticeBasis basis = make_basis(out);
    if (!modified || lll_conditions_hold(basis, delta, 1e-9)) {
      basis.reduced = true;
      return basis;
    }
  }
  throw NumericError("LLL reduction did not stabilize");
}

Eigen::VectorXd babai_round(const LatticeBasis& basis, const Eigen::VectorXd& t) {
  Eigen::VectorXd x = basis.W.partialPivLu().solve(t);
  for (int i = 0; i < x.size(); ++i) x[i] = round_half_away(x[i]);
  return basis.W * x;
}

Eigen::VectorXd babai_nearest_plane(const LatticeBasis& basis, const Eigen::VectorXd& t) {
  return detail::Enumerator(basis).nearest_plane(t);
}

CvpResult cvp_exact(const LatticeBasis& basis, const Eigen::VectorXd& t) {
  LatticeBasis reduced = basis.reduced ? basis : lll_reduce(basis.W);
  return detail::Enumerator(reduced).closest(t);
}

CvpResult svp_lambda(const LatticeBasis& basis) {
  LatticeBasis reduced = basis.reduced ? basis : lll_reduce(basis.W);
  return detail::Enumerator(reduced).shortest_nonzero();
}

Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& Q) {
  if (Q.rows() != Q.cols()) throw InvalidInput("matrix must be square");
  double scale = 1.0 + Q.cwiseAbs().maxCoeff();
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InvalidInput("matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw InvalidInput("matrix is not positive definite");
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

namespace detail {

Enumerator::Enumerator(const LatticeBasis& reduced_basis) : basis_(reduced_basis) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis_.W);
  Qfac_ = qr.householderQ();
  R_ = qr.matrixQR().triangularView<Eigen::Upper>();
  // normalize to a positive diagonal
  for (int i = 0; i < R_.rows(); ++i)
    if (R_(i, i) < 0.0) {
      R_.row(i) = -R_.row(i);
      Qfac_.col(i) = -Qfac_.col(i);
    }
}

Eigen::VectorXd Enumerator::nearest_plane(const Eigen::VectorXd& t) const {
  const int g = basis_.dim();
  Eigen::VectorXd tp = Qfac_.transpose() * t;
  Eigen::VectorXd n(g);
  for (int j = g - 1; j >= 0; --j) {
    double acc = tp[j];
    for (int k = j + 1; k < g; ++k) acc -= R_(j, k) * n[k];
    n[j] = round_half_away(acc / R_(j, j));
  }
  return basis_.W * n;
}

CvpResult Enumerator::closest(const Eigen::VectorXd& t) const {
  return enumerate(t, false);
}

CvpResult Enumerator::shortest_nonzero() const {
  return enumerate(Eigen::VectorXd::Zero(basis_.dim()), true);
}

CvpResult Enumerator::enumerate(const Eigen::VectorXd& t, bool exclude_zero) const {
  const int g = basis_.dim();
  Eigen::VectorXd tp = Qfac_.transpose() * t;

  Eigen::VectorXd best_n(g);
  double best = 0.0;
  if (exclude_zero) {
    // shortest basis vector as incumbent
    int jmin = 0;
    basis_.W.colwise().squaredNorm().minCoeff(&jmin);
    best_n.setZero();
    best_n[jmin] = 1.0;
    best = basis_.W.col(jmin).squaredNorm();
  } else {
    Eigen::VectorXd n(g);
    for (int j = g - 1; j >= 0; --j) {
      double acc = tp[j];
      for (int k = j + 1; k < g; ++k) acc -= R_(j, k) * n[k];
      n[j] = round_half_away(acc / R_(j, j));
    }
    best_n = n;
    best = (tp - R_ * n).squaredNorm();
  }

  // depth-first zig-zag enumeration with radius pruning (Schnorr--Euchner
  // ordering of the Kannan--Fincke--Pohst search)
  Eigen::VectorXd n(g);
  std::function<void(int, double)> descend = [&](int j, double partial) {
    double acc = tp[j];
    for (int k = j + 1; k < g; ++k) acc -= R_(j, k) * n[k];
    double c = acc / R_(j, j);
    double n0 = round_half_away(c);
    double rjj2 = R_(j, j) * R_(j, j);
    // zig-zag: n0, n0+1, n0-1, n0+2, ...; per-direction contributions grow
    // monotonically, so each side is abandoned on its first pruned candidate
    bool plus_done = false, minus_done = false;
    for (int step = 0; !(plus_done && minus_done); ++step) {
      double cand = (step % 2 == 1) ? n0 + (step + 1) / 2 : n0 - step / 2;
      if (step > 0 && (step % 2 == 1 ? plus_done : minus_done)) continue;
      double d = partial + rjj2 * (cand - c) * (cand - c);
      if (d >= best) {
        if (step == 0) break;  // n0 is the closest integer; all others fail
        (step % 2 == 1 ? plus_done : minus_done) = true;
        continue;
      }
      n[j] = cand;
      if (j == 0) {
        if (!(exclude_zero && n.isZero(0.0)) && d < best) {
          best = d;
          best_n = n;
        }
      } else {
        descend(j - 1, d);
      }
    }
  };
  descend(g - 1, 0.0);

  CvpResult res;
  res.vector = basis_.W * best_n;
  res.distance = std::sqrt((tp - R_ * best_n).squaredNorm());
  return res;
}

}  // namespace detail

}  // namespace tropaj
