/* Public C API of the tropaj shared library.
 *
 * All objects are opaque handles created by tropaj_* constructors and
 * released with the matching *_free function. Functions return
 * TROPAJ_OK on success; on failure the output handle is untouched and
 * tropaj_last_error() returns a thread-local description.
 */
#ifndef TROPAJ_H
#define TROPAJ_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tropaj_graph tropaj_graph;
typedef struct tropaj_transform tropaj_transform;
typedef struct tropaj_distmat tropaj_distmat;

typedef enum {
  TROPAJ_OK = 0,
  TROPAJ_ERR_ARGUMENT = 1,     /* bad flag/parameter combination */
  TROPAJ_ERR_INVALID_DATA = 2, /* malformed or invalid input data */
  TROPAJ_ERR_NUMERIC = 3,      /* numerical failure */
  TROPAJ_ERR_IO = 4,           /* file read/write failure */
} tropaj_status;

typedef enum {
  TROPAJ_METRIC_TROP = 0,
  TROPAJ_METRIC_FZ = 1,
} tropaj_metric;

typedef enum {
  TROPAJ_METHOD_EXACT = 0,
  TROPAJ_METHOD_BABAI_ROUND = 1,
  TROPAJ_METHOD_BABAI_PLANE = 2,
  TROPAJ_METHOD_TRUNCATED = 3,
} tropaj_method;

const char* tropaj_last_error(void);

/* strings returned through char** outputs are released with this */
void tropaj_string_free(char* s);

/* ---- graphs ---- */

tropaj_status tropaj_graph_parse(const char* json_text, tropaj_graph** out);
tropaj_status tropaj_graph_read_file(const char* path, tropaj_graph** out);
tropaj_status tropaj_graph_write_file(const tropaj_graph* g, const char* path);
tropaj_status tropaj_graph_to_json(const tropaj_graph* g, char** out_text);

/* random model: n vertices, n-1+genus edges, lengths uniform in
 * [len_min, len_max], reproducible for a fixed seed */
tropaj_status tropaj_graph_gen(int n_vertices, int genus, uint64_t seed,
                               double len_min, double len_max, tropaj_graph** out);

tropaj_status tropaj_graph_simplify(const tropaj_graph* g, tropaj_graph** out);

int tropaj_graph_vertex_count(const tropaj_graph* g);
int tropaj_graph_edge_count(const tropaj_graph* g);
int tropaj_graph_genus(const tropaj_graph* g);

void tropaj_graph_free(tropaj_graph* g);

/* ---- transforms ---- */

/* Abel-Jacobi transform rooted at `root`; kappa > 0 appends kappa interior
 * sample points per edge; simplify_first != 0 runs model simplification
 * before the transform. */
tropaj_status tropaj_transform_compute(const tropaj_graph* g, int root, int kappa,
                                       int simplify_first, tropaj_transform** out);

tropaj_status tropaj_transform_parse(const char* json_text, tropaj_transform** out);
tropaj_status tropaj_transform_read_file(const char* path, tropaj_transform** out);
tropaj_status tropaj_transform_write_file(const tropaj_transform* tr, const char* path);
tropaj_status tropaj_transform_to_json(const tropaj_transform* tr, char** out_text);

int tropaj_transform_genus(const tropaj_transform* tr);
int tropaj_transform_point_count(const tropaj_transform* tr);

/* row-major g x g period matrix / g x N point matrix */
tropaj_status tropaj_transform_period_matrix(const tropaj_transform* tr, double* out);
tropaj_status tropaj_transform_points(const tropaj_transform* tr, double* out);

void tropaj_transform_free(tropaj_transform* tr);

/* ---- distance matrices ---- */

/* TROPAJ_METRIC_FZ requires TROPAJ_METHOD_EXACT; tight_threshold only applies to
 * TROPAJ_METHOD_TRUNCATED; threads <= 0 uses machine parallelism */
tropaj_status tropaj_distmat_compute(const tropaj_transform* tr, tropaj_metric metric,
                                     tropaj_method method, int tight_threshold,
                                     int threads, tropaj_distmat** out);

tropaj_status tropaj_distmat_read_file(const char* path, tropaj_distmat** out);
tropaj_status tropaj_distmat_write_file(const tropaj_distmat* d, const char* path);

int tropaj_distmat_size(const tropaj_distmat* d);
/* +infinity for truncated entries */
double tropaj_distmat_get(const tropaj_distmat* d, int i, int j);

void tropaj_distmat_free(tropaj_distmat* d);

/* ---- multidimensional scaling ---- */

/* classical MDS into `dim` coordinates; writes N*dim doubles row-major into
 * coords and the truncation residual into *residual (may be NULL) */
tropaj_status tropaj_mds(const tropaj_distmat* d, int dim, double* coords,
                         double* residual);

#ifdef __cplusplus
}
#endif

#endif /* TROPAJ_H */
