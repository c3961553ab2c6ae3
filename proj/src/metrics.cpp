#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

namespace tropaj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TropBackend {
  Eigen::MatrixXd half;        // Q^{1/2}
  Eigen::LDLT<Eigen::MatrixXd> half_solver;
  LatticeBasis reduced;        // LLL-reduced basis of the Q^{1/2} lattice
  detail::Enumerator enumerator;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;  // of the reduced basis

  explicit TropBackend(const Eigen::MatrixXd& Q)
      : half(sqrt_spd(Q)),
        half_solver(half),
        reduced(lll_reduce(half)),
        enumerator(reduced),
        lu(reduced.W) {}

  Eigen::VectorXd to_torus(const Eigen::VectorXd& x) const {
    return half_solver.solve(x);
  }

  double distance(const Eigen::VectorXd& t, TropMethod method) const {
    switch (method) {
      case TropMethod::Exact:
        return enumerator.closest(t).distance;
      case TropMethod::BabaiRound: {
        Eigen::VectorXd k = lu.solve(t);
        for (int i = 0; i < k.size(); ++i) k[i] = std::round(k[i]);
        return (t - reduced.W * k).norm();
      }
      case TropMethod::BabaiPlane:
        return (t - enumerator.nearest_plane(t)).norm();
    }
    return 0.0;
  }
};

void for_pairs(int n, int threads, const std::function<void(int, int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, threads);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  if (threads == 1 || pairs.size() < 64) {
    for (auto [i, j] : pairs) body(i, j);
    return;
  }
  std::vector<std::thread> workers;
  for (int w = 0; w < threads; ++w)
    workers.emplace_back([&, w] {
      for (size_t k = w; k < pairs.size(); k += threads) body(pairs[k].first, pairs[k].second);
    });
  for (auto& t : workers) t.join();
}

}  // namespace

std::string metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::TropExact: return "trop-exact";
    case MetricKind::TropBabaiRound: return "trop-babai-round";
    case MetricKind::TropBabaiPlane: return "trop-babai-plane";
    case MetricKind::TropTruncated: return "trop-truncated";
    case MetricKind::TropClosedForm: return "trop-closed-form";
    case MetricKind::FosterZhang: return "foster-zhang";
  }
  return "?";
}

double trop_distance(const Eigen::MatrixXd& Q, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& y, TropMethod method) {
  if (x.size() != Q.rows() || y.size() != Q.rows())
    throw InvalidInput("coordinate dimension does not match Q");
  TropBackend backend(Q);
  return backend.distance(backend.to_torus(x - y), method);
}

DistanceMatrix trop_distmat(const TropicalTransform& tr, TropMethod method, int threads) {
  TropBackend backend(tr.Q);
  Eigen::MatrixXd X = backend.half_solver.solve(tr.V);
  const int n = static_cast<int>(X.cols());
  DistanceMatrix D;
  D.entries = Eigen::MatrixXd::Zero(n, n);
  switch (method) {
    case TropMethod::Exact: D.metric_kind = MetricKind::TropExact; break;
    case TropMethod::BabaiRound: D.metric_kind = MetricKind::TropBabaiRound; break;
    case TropMethod::BabaiPlane: D.metric_kind = MetricKind::TropBabaiPlane; break;
  }
  for_pairs(n, threads, [&](int i, int j) {
    double d = backend.distance(X.col(i) - X.col(j), method);
    D.entries(i, j) = D.entries(j, i) = d;
  });
  return D;
}

DistanceMatrix trop_distmat_truncated(const TropicalTransform& tr, bool tight_threshold,
                                      int threads) {
  TropBackend backend(tr.Q);
  Eigen::MatrixXd X = backend.half_solver.solve(tr.V);
  const int n = static_cast<int>(X.cols());
  const int g = tr.genus;
  double theta = tight_threshold
                     ? 0.5 * svp_lambda(backend.reduced).distance
                     : backend.reduced.W.col(0).norm() / std::exp2(0.5 * (g + 1));
  DistanceMatrix D;
  D.entries = Eigen::MatrixXd::Zero(n, n);
  D.metric_kind = MetricKind::TropTruncated;
  D.threshold = theta;
  for_pairs(n, threads, [&](int i, int j) {
    Eigen::VectorXd t = X.col(i) - X.col(j);
    double d = (t - backend.enumerator.nearest_plane(t)).norm();
    double entry = d <= theta ? d : kInf;
    D.entries(i, j) = D.entries(j, i) = entry;
  });
  return D;
}

bool detect_diagonal(const Eigen::MatrixXd& Q) {
  for (int i = 0; i < Q.rows(); ++i)
    for (int j = 0; j < Q.cols(); ++j)
      if (i != j && std::abs(Q(i, j)) > 1e-12) return false;
  return true;
}

double trop_distance_diagonal(const Eigen::MatrixXd& Q, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) {
  if (!detect_diagonal(Q)) throw InvalidInput("Q is not diagonal");
  if (x.size() != Q.rows() || y.size() != Q.rows())
    throw InvalidInput("coordinate dimension does not match Q");
  double d2 = 0.0;
  for (int i = 0; i < Q.rows(); ++i) {
    double q = Q(i, i);
    double delta = x[i] - y[i];
    double n = std::round(delta / q);
    d2 += (delta - n * q) * (delta - n * q) / q;
  }
  return std::sqrt(d2);
}

double fz_distance(const Eigen::MatrixXi& C, const Eigen::VectorXd& albanese_x,
                   const Eigen::VectorXd& albanese_y) {
  const int g = static_cast<int>(C.rows());
  const int m = static_cast<int>(C.cols());
  if (albanese_x.size() != g || albanese_y.size() != g)
    throw InvalidInput("coordinate dimension does not match C");
  Eigen::VectorXd d = albanese_x - albanese_y;

  // each variable needs a unit column for its direct bound |d_i - n_i| < t;
  // the non-tree block of a transform's C provides one per cycle
  std::vector<int> unit_col(g, -1);
  std::vector<int> support(g, 0);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < m; ++j)
      if (C(i, j) != 0) ++support[i];
  for (int j = 0; j < m; ++j) {
    int nz = 0, row = -1;
    for (int i = 0; i < g; ++i)
      if (C(i, j) != 0) {
        ++nz;
        row = i;
      }
    if (nz == 1 && std::abs(C(row, j)) == 1) unit_col[row] = j;
  }
  for (int i = 0; i < g; ++i)
    if (unit_col[i] < 0)
      throw InvalidInput("cycle-edge matrix lacks a unit column for some cycle");

  std::vector<int> order(g);
  for (int i = 0; i < g; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return support[a] != support[b] ? support[a] > support[b]
                                                                : a < b; });

  // incumbent from n = 0
  double best = 0.0;
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < g; ++i) s += d[i] * C(i, j);
    best = std::max(best, std::abs(s));
  }

  std::vector<double> colsum(m, 0.0);
  std::vector<int> remaining(m, 0);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < g; ++i)
      if (C(i, j) != 0) ++remaining[j];

  std::function<void(int, double)> descend = [&](int level, double partial_max) {
    if (level == g) {
      if (partial_max < best) best = partial_max;
      return;
    }
    int var = order[level];
    double n0 = std::round(d[var]);
    bool plus_done = false, minus_done = false;
    for (int step = 0; !(plus_done && minus_done); ++step) {
      double cand = (step % 2 == 1) ? n0 + (step + 1) / 2 : n0 - step / 2;
      if (step > 0 && (step % 2 == 1 ? plus_done : minus_done)) continue;
      if (std::abs(d[var] - cand) >= best) {
        if (step == 0) break;
        (step % 2 == 1 ? plus_done : minus_done) = true;
        continue;
      }
      double resid = d[var] - cand;
      double node_max = partial_max;
      bool pruned = false;
      for (int j = 0; j < m; ++j)
        if (C(var, j) != 0) {
          colsum[j] += resid * C(var, j);
          --remaining[j];
          if (remaining[j] == 0 && std::abs(colsum[j]) >= best) pruned = true;
          if (remaining[j] == 0) node_max = std::max(node_max, std::abs(colsum[j]));
        }
      if (!pruned) descend(level + 1, node_max);
      for (int j = 0; j < m; ++j)
        if (C(var, j) != 0) {
          colsum[j] -= resid * C(var, j);
          ++remaining[j];
        }
    }
  };
  descend(0, 0.0);
  return best;
}

DistanceMatrix fz_distmat(const TropicalTransform& tr, int threads) {
  if (tr.genus < 1) throw InvalidInput("genus must be >= 1");
  Eigen::MatrixXd alb = albanese_coordinates(tr);
  const int n = static_cast<int>(alb.cols());
  DistanceMatrix D;
  D.entries = Eigen::MatrixXd::Zero(n, n);
  D.metric_kind = MetricKind::FosterZhang;
  for_pairs(n, threads, [&](int i, int j) {
    double d = fz_distance(tr.C, alb.col(i), alb.col(j));
    D.entries(i, j) = D.entries(j, i) = d;
  });
  return D;
}

MdsResult classical_mds(const DistanceMatrix& D, int dim) {
  const int n = D.size();
  if (dim < 1) throw InvalidInput("embedding dimension must be positive");
  if (dim > n) throw InvalidInput("embedding dimension exceeds point count");
  if (!D.entries.allFinite())
    throw InvalidInput("distance matrix has infinite entries; MDS needs a full matrix");
  Eigen::MatrixXd D2 = D.entries.array().square();
  Eigen::MatrixXd J =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd B = -0.5 * J * D2 * J;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B);
  if (eig.info() != Eigen::Success) throw NumericError("MDS eigendecomposition failed");

  MdsResult res;
  res.coords = Eigen::MatrixXd::Zero(n, dim);
  double discarded = 0.0;
  // eigenvalues ascending: top-dim live at the tail
  for (int k = 0; k < n; ++k) {
    double lambda = eig.eigenvalues()[k];
    int rank = n - 1 - k;  // 0 = largest
    if (rank >= dim) {
      discarded += std::abs(lambda);
      if (lambda < -1e-12) res.clamped_negative = true;
      continue;
    }
    if (lambda < 0.0) {
      if (lambda < -1e-12) res.clamped_negative = true;
      lambda = 0.0;
    }
    Eigen::VectorXd v = eig.eigenvectors().col(k);
    for (int i = 0; i < n; ++i)
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    res.coords.col(rank) = std::sqrt(lambda) * v;
  }
  res.residual = std::sqrt(discarded);
  return res;
}

std::string distmat_to_csv(const DistanceMatrix& D) {
  std::ostringstream out;
  out.precision(17);
  out << "# metric=" << metric_kind_name(D.metric_kind) << " threshold=";
  if (D.threshold)
    out << *D.threshold;
  else
    out << "none";
  out << "\n";
  for (int i = 0; i < D.size(); ++i) {
    for (int j = 0; j < D.size(); ++j) {
      if (j) out << ",";
      if (std::isinf(D.entries(i, j)))
        out << "inf";
      else
        out << D.entries(i, j);
    }
    out << "\n";
  }
  return out.str();
}

DistanceMatrix distmat_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# metric=", 0) != 0)
    throw InvalidInput("distance CSV must start with a '# metric=' header");
  DistanceMatrix D;
  {
    std::istringstream hdr(line.substr(2));
    std::string tok;
    while (hdr >> tok) {
      if (tok.rfind("metric=", 0) == 0) {
        std::string name = tok.substr(7);
        bool found = false;
        for (MetricKind k : {MetricKind::TropExact, MetricKind::TropBabaiRound,
                             MetricKind::TropBabaiPlane, MetricKind::TropTruncated,
                             MetricKind::TropClosedForm, MetricKind::FosterZhang})
          if (metric_kind_name(k) == name) {
            D.metric_kind = k;
            found = true;
          }
        if (!found) throw InvalidInput("unknown metric kind: " + name);
      } else if (tok.rfind("threshold=", 0) == 0) {
        std::string v = tok.substr(10);
        if (v != "none") D.threshold = std::stod(v);
      }
    }
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      row.push_back(cell == "inf" ? kInf : std::stod(cell));
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  D.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw InvalidInput("distance CSV is not square");
    for (int j = 0; j < n; ++j) D.entries(i, j) = rows[i][j];
  }
  return D;
}

}  // namespace tropaj
