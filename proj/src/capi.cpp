#include "tropaj/tropaj.h"

#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

#include "graph.hpp"
#include "metrics.hpp"
#include "transform.hpp"

using namespace tropaj;

struct tropaj_graph {
  MetricGraphModel model;
};

struct tropaj_transform {
  TropicalTransform tr;
};

struct tropaj_distmat {
  DistanceMatrix d;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
tropaj_status guarded(F&& f) {
  try {
    f();
    return TROPAJ_OK;
  } catch (const InvalidInput& e) {
    g_last_error = e.what();
    return TROPAJ_ERR_INVALID_DATA;
  } catch (const NumericError& e) {
    g_last_error = e.what();
    return TROPAJ_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TROPAJ_ERR_NUMERIC;
  }
}

std::string read_file(const char* path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot open ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const char* path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(std::string("cannot open ") + path);
  out << text;
  if (!out) throw std::runtime_error(std::string("write failed: ") + path);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// pipeline used by both the transform constructor and the CLI
TropicalTransform build_transform(const MetricGraphModel& model, int root, int kappa,
                                  bool simplify_first) {
  MetricGraphModel work = model;
  if (simplify_first) work = simplify(model);
  if (root < 0 || root >= work.n_vertices)
    throw InvalidInput("root vertex out of range");
  SpanningDecomposition dec = spanning_decomposition(work, root);
  TropicalTransform tr = abel_jacobi(dec);
  if (kappa > 0) tr = interpolate(tr, dec, kappa);
  return tr;
}

tropaj_status io_guarded(const char* path, const std::function<void()>& f) {
  try {
    f();
    return TROPAJ_OK;
  } catch (const InvalidInput& e) {
    g_last_error = e.what();
    return TROPAJ_ERR_INVALID_DATA;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TROPAJ_ERR_IO;
  }
}

}  // namespace

extern "C" {

const char* tropaj_last_error(void) { return g_last_error.c_str(); }

void tropaj_string_free(char* s) { delete[] s; }

tropaj_status tropaj_graph_parse(const char* json_text, tropaj_graph** out) {
  if (!json_text || !out) return TROPAJ_ERR_ARGUMENT;
  return guarded([&] { *out = new tropaj_graph{parse_graph(json_text)}; });
}

tropaj_status tropaj_graph_read_file(const char* path, tropaj_graph** out) {
  if (!path || !out) return TROPAJ_ERR_ARGUMENT;
  return io_guarded(path, [&] { *out = new tropaj_graph{parse_graph(read_file(path))}; });
}

tropaj_status tropaj_graph_write_file(const tropaj_graph* g, const char* path) {
  if (!g || !path) return TROPAJ_ERR_ARGUMENT;
  return io_guarded(path, [&] { write_file(path, serialize_graph(g->model)); });
}

tropaj_status tropaj_graph_to_json(const tropaj_graph* g, char** out_text) {
  if (!g || !out_text) return TROPAJ_ERR_ARGUMENT;
  return guarded([&] { *out_text = dup_string(serialize_graph(g->model)); });
}

tropaj_status tropaj_graph_gen(int n_vertices, int genus, uint64_t seed,
                               double len_min, double len_max, tropaj_graph** out) {
  if (!out) return TROPAJ_ERR_ARGUMENT;
  return guarded(
      [&] { *out = new tropaj_graph{gen_random(n_vertices, genus, seed, len_min, len_max)}; });
}

tropaj_status tropaj_graph_simplify(const tropaj_graph* g, tropaj_graph** out) {
  if (!g || !out) return TROPAJ_ERR_ARGUMENT;
  return guarded([&] { *out = new tropaj_graph{simplify(g->model)}; });
}

int tropaj_graph_vertex_count(const tropaj_graph* g) { return g ? g->model.n_vertices : 0; }
int tropaj_graph_edge_count(const tropaj_graph* g) { return g ? g->model.edge_count() : 0; }
int tropaj_graph_genus(const tropaj_graph* g) { return g ? g->model.genus() : 0; }

void tropaj_graph_free(tropaj_graph* g) { delete g; }

tropaj_status tropaj_transform_compute(const tropaj_graph* g, int root, int kappa,
                                       int simplify_first, tropaj_transform** out) {
  if (!g || !out || kappa < 0) return TROPAJ_ERR_ARGUMENT;
  return guarded([&] {
    *out = new tropaj_transform{build_transform(g->model, root, kappa, simplify_first != 0)};
  });
}

tropaj_status tropaj_transform_parse(const char* json_text, tropaj_transform** out) {
  if (!json_text || !out) return TROPAJ_ERR_ARGUMENT;
  return guarded([&] { *out = new tropaj_transform{parse_transform(json_text)}; });
}

tropaj_status tropaj_transform_read_file(const char* path, tropaj_transform** out) {
  if (!path || !out) return TROPAJ_ERR_ARGUMENT;
  return io_guarded(path,
                    [&] { *out = new tropaj_transform{parse_transform(read_file(path))}; });
}

tropaj_status tropaj_transform_write_file(const tropaj_transform* tr, const char* path) {
  if (!tr || !path) return TROPAJ_ERR_ARGUMENT;
  return io_guarded(path, [&] { write_file(path, serialize_transform(tr->tr)); });
}

tropaj_status tropaj_transform_to_json(const tropaj_transform* tr, char** out_text) {
  if (!tr || !out_text) return TROPAJ_ERR_ARGUMENT;
  return guarded([&] { *out_text = dup_string(serialize_transform(tr->tr)); });
}

int tropaj_transform_genus(const tropaj_transform* tr) { return tr ? tr->tr.genus : 0; }
int tropaj_transform_point_count(const tropaj_transform* tr) {
  return tr ? tr->tr.point_count() : 0;
}

tropaj_status tropaj_transform_period_matrix(const tropaj_transform* tr, double* out) {
  if (!tr || !out) return TROPAJ_ERR_ARGUMENT;
  const auto& Q = tr->tr.Q;
  for (int i = 0; i < Q.rows(); ++i)
    for (int j = 0; j < Q.cols(); ++j) *out++ = Q(i, j);
  return TROPAJ_OK;
}

tropaj_status tropaj_transform_points(const tropaj_transform* tr, double* out) {
  if (!tr || !out) return TROPAJ_ERR_ARGUMENT;
  const auto& V = tr->tr.V;
  for (int i = 0; i < V.rows(); ++i)
    for (int j = 0; j < V.cols(); ++j) *out++ = V(i, j);
  return TROPAJ_OK;
}

void tropaj_transform_free(tropaj_transform* tr) { delete tr; }

tropaj_status tropaj_distmat_compute(const tropaj_transform* tr, tropaj_metric metric,
                                     tropaj_method method, int tight_threshold,
                                     int threads, tropaj_distmat** out) {
  if (!tr || !out) return TROPAJ_ERR_ARGUMENT;
  if (metric == TROPAJ_METRIC_FZ && method != TROPAJ_METHOD_EXACT)
    return TROPAJ_ERR_ARGUMENT;
  return guarded([&] {
    DistanceMatrix d;
    if (metric == TROPAJ_METRIC_FZ) {
      d = fz_distmat(tr->tr, threads);
    } else {
      switch (method) {
        case TROPAJ_METHOD_EXACT:
          d = trop_distmat(tr->tr, TropMethod::Exact, threads);
          break;
        case TROPAJ_METHOD_BABAI_ROUND:
          d = trop_distmat(tr->tr, TropMethod::BabaiRound, threads);
          break;
        case TROPAJ_METHOD_BABAI_PLANE:
          d = trop_distmat(tr->tr, TropMethod::BabaiPlane, threads);
          break;
        case TROPAJ_METHOD_TRUNCATED:
          d = trop_distmat_truncated(tr->tr, tight_threshold != 0, threads);
          break;
      }
    }
    *out = new tropaj_distmat{std::move(d)};
  });
}

tropaj_status tropaj_distmat_read_file(const char* path, tropaj_distmat** out) {
  if (!path || !out) return TROPAJ_ERR_ARGUMENT;
  return io_guarded(path,
                    [&] { *out = new tropaj_distmat{distmat_from_csv(read_file(path))}; });
}

tropaj_status tropaj_distmat_write_file(const tropaj_distmat* d, const char* path) {
  if (!d || !path) return TROPAJ_ERR_ARGUMENT;
  return io_guarded(path, [&] { write_file(path, distmat_to_csv(d->d)); });
}

int tropaj_distmat_size(const tropaj_distmat* d) { return d ? d->d.size() : 0; }

double tropaj_distmat_get(const tropaj_distmat* d, int i, int j) {
  return d->d.entries(i, j);
}

void tropaj_distmat_free(tropaj_distmat* d) { delete d; }

tropaj_status tropaj_mds(const tropaj_distmat* d, int dim, double* coords,
                         double* residual) {
  if (!d || !coords || dim < 1) return TROPAJ_ERR_ARGUMENT;
  return guarded([&] {
    MdsResult res = classical_mds(d->d, dim);
    for (int i = 0; i < res.coords.rows(); ++i)
      for (int k = 0; k < dim; ++k) *coords++ = res.coords(i, k);
    if (residual) *residual = res.residual;
  });
}

}  // extern "C"
