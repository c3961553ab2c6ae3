// Command-line front end for the tropaj shared library. Data goes to files,
// diagnostics (timings, warnings) to stderr. Exit codes: 0 success, 2 usage
// error, 3 invalid input data, 4 numerical failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tropaj/tropaj.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

[[noreturn]] void fail(tropaj_status status) {
  std::cerr << "tropaj: " << tropaj_last_error() << "\n";
  std::exit(status == TROPAJ_ERR_NUMERIC ? kExitNumeric : kExitData);
}

void check(tropaj_status status) {
  if (status != TROPAJ_OK) fail(status);
}

struct Range {
  int lo = 0, hi = 0, step = 1;
};

Range parse_range(const std::string& text) {
  Range r;
  if (std::sscanf(text.c_str(), "%d:%d:%d", &r.lo, &r.hi, &r.step) == 3) {
  } else if (std::sscanf(text.c_str(), "%d", &r.lo) == 1) {
    r.hi = r.lo;
    r.step = 1;
  } else {
    std::cerr << "tropaj: bad range '" << text << "', expected a:b:step\n";
    std::exit(kExitUsage);
  }
  if (r.step <= 0 || r.hi < r.lo) {
    std::cerr << "tropaj: bad range '" << text << "'\n";
    std::exit(kExitUsage);
  }
  return r;
}

struct MetricChoice {
  std::string metric = "trop";
  std::string method = "exact";
  bool tight = false;
  int threads = 0;

  tropaj_metric metric_id() const {
    return metric == "fz" ? TROPAJ_METRIC_FZ : TROPAJ_METRIC_TROP;
  }
  tropaj_method method_id() const {
    if (method == "babai-round") return TROPAJ_METHOD_BABAI_ROUND;
    if (method == "babai-plane") return TROPAJ_METHOD_BABAI_PLANE;
    if (method == "truncated") return TROPAJ_METHOD_TRUNCATED;
    return TROPAJ_METHOD_EXACT;
  }
  void validate() const {
    if (metric == "fz" && method != "exact") {
      std::cerr << "tropaj: metric fz takes no --method\n";
      std::exit(kExitUsage);
    }
  }
};

using GraphPtr = std::unique_ptr<tropaj_graph, decltype(&tropaj_graph_free)>;
using TransformPtr = std::unique_ptr<tropaj_transform, decltype(&tropaj_transform_free)>;
using DistmatPtr = std::unique_ptr<tropaj_distmat, decltype(&tropaj_distmat_free)>;

GraphPtr read_graph(const std::string& path) {
  tropaj_graph* g = nullptr;
  check(tropaj_graph_read_file(path.c_str(), &g));
  return {g, &tropaj_graph_free};
}

double timed_distmat(const tropaj_transform* tr, const MetricChoice& mc,
                     tropaj_distmat** out) {
  auto start = std::chrono::steady_clock::now();
  check(tropaj_distmat_compute(tr, mc.metric_id(), mc.method_id(), mc.tight ? 1 : 0,
                               mc.threads, out));
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  return dt.count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tropical Abel-Jacobi transforms and Jacobian distance matrices"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random metric graph");
  int gen_nodes = 0, gen_genus = 0;
  std::uint64_t gen_seed = 0;
  double len_min = 0.5, len_max = 1.5;
  std::string gen_out;
  gen->add_option("--nodes", gen_nodes, "vertex count")->required();
  gen->add_option("--genus", gen_genus, "genus (extra edges)")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--len-min", len_min, "minimum edge length");
  gen->add_option("--len-max", len_max, "maximum edge length");
  gen->add_option("-o,--output", gen_out, "output graph JSON")->required();

  // simplify
  auto* simp = app.add_subcommand("simplify", "compute the minimal combinatorial model");
  std::string simp_in, simp_out;
  simp->add_option("-i,--input", simp_in, "input graph JSON")->required();
  simp->add_option("-o,--output", simp_out, "output graph JSON")->required();

  // transform
  auto* trans = app.add_subcommand("transform", "compute the tropical Abel-Jacobi transform");
  std::string trans_in, trans_out;
  int kappa = 0, root = 0;
  bool no_simplify = false;
  trans->add_option("-i,--input", trans_in, "input graph JSON")->required();
  trans->add_option("--kappa", kappa, "interior sample points per edge");
  trans->add_option("--root", root, "base vertex");
  trans->add_flag("--no-simplify", no_simplify, "skip model simplification");
  trans->add_option("-o,--output", trans_out, "output transform JSON")->required();

  // distmat
  auto* dist = app.add_subcommand("distmat", "compute a pairwise distance matrix");
  std::string dist_in, dist_out;
  MetricChoice mc;
  dist->add_option("-i,--input", dist_in, "input transform JSON")->required();
  dist->add_option("--metric", mc.metric, "trop or fz")
      ->check(CLI::IsMember({"trop", "fz"}));
  dist->add_option("--method", mc.method, "trop backend")
      ->check(CLI::IsMember({"exact", "babai-round", "babai-plane", "truncated"}));
  dist->add_flag("--tight-threshold", mc.tight, "use lambda/2 threshold (truncated)");
  dist->add_option("--threads", mc.threads, "worker threads (0 = machine parallelism)");
  dist->add_option("-o,--output", dist_out, "output distance CSV")->required();

  // mds
  auto* mds = app.add_subcommand("mds", "classical MDS coordinates from a distance CSV");
  std::string mds_in, mds_out;
  mds->add_option("-i,--input", mds_in, "input distance CSV")->required();
  mds->add_option("-o,--output", mds_out, "output coordinate CSV")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "timing sweep over generated graphs");
  std::string nodes_range = "30", genus_range = "5", bench_out;
  MetricChoice bmc;
  std::uint64_t bench_seed = 0;
  bench->add_option("--nodes-range", nodes_range, "a:b:step")->required();
  bench->add_option("--genus-range", genus_range, "a:b:step")->required();
  bench->add_option("--metric", bmc.metric, "trop or fz")
      ->check(CLI::IsMember({"trop", "fz"}));
  bench->add_option("--method", bmc.method, "trop backend")
      ->check(CLI::IsMember({"exact", "babai-round", "babai-plane", "truncated"}));
  bench->add_option("--threads", bmc.threads, "worker threads");
  bench->add_option("--seed", bench_seed, "RNG seed")->required();
  bench->add_option("-o,--output", bench_out, "output timing CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (gen->parsed()) {
    tropaj_graph* g = nullptr;
    check(tropaj_graph_gen(gen_nodes, gen_genus, gen_seed, len_min, len_max, &g));
    GraphPtr graph(g, &tropaj_graph_free);
    check(tropaj_graph_write_file(graph.get(), gen_out.c_str()));
    return 0;
  }

  if (simp->parsed()) {
    GraphPtr graph = read_graph(simp_in);
    tropaj_graph* out = nullptr;
    check(tropaj_graph_simplify(graph.get(), &out));
    GraphPtr minimal(out, &tropaj_graph_free);
    check(tropaj_graph_write_file(minimal.get(), simp_out.c_str()));
    std::cerr << "simplified to " << tropaj_graph_vertex_count(minimal.get())
              << " vertices, " << tropaj_graph_edge_count(minimal.get()) << " edges\n";
    return 0;
  }

  if (trans->parsed()) {
    GraphPtr graph = read_graph(trans_in);
    tropaj_transform* tr = nullptr;
    check(tropaj_transform_compute(graph.get(), root, kappa, no_simplify ? 0 : 1, &tr));
    TransformPtr transform(tr, &tropaj_transform_free);
    check(tropaj_transform_write_file(transform.get(), trans_out.c_str()));
    return 0;
  }

  if (dist->parsed()) {
    mc.validate();
    tropaj_transform* tr = nullptr;
    check(tropaj_transform_read_file(dist_in.c_str(), &tr));
    TransformPtr transform(tr, &tropaj_transform_free);
    tropaj_distmat* d = nullptr;
    double seconds = timed_distmat(transform.get(), mc, &d);
    DistmatPtr distmat(d, &tropaj_distmat_free);
    check(tropaj_distmat_write_file(distmat.get(), dist_out.c_str()));
    std::cerr << "distmat " << tropaj_distmat_size(distmat.get()) << "x"
              << tropaj_distmat_size(distmat.get()) << " in " << seconds << " s\n";
    return 0;
  }

  if (mds->parsed()) {
    tropaj_distmat* d = nullptr;
    check(tropaj_distmat_read_file(mds_in.c_str(), &d));
    DistmatPtr distmat(d, &tropaj_distmat_free);
    const int n = tropaj_distmat_size(distmat.get());
    std::vector<double> coords(static_cast<size_t>(n) * 2);
    double residual = 0.0;
    check(tropaj_mds(distmat.get(), 2, coords.data(), &residual));
    std::ofstream out(mds_out);
    if (!out) {
      std::cerr << "tropaj: cannot open " << mds_out << "\n";
      return kExitData;
    }
    out.precision(17);
    out << "id,x,y\n";
    for (int i = 0; i < n; ++i)
      out << i << "," << coords[2 * i] << "," << coords[2 * i + 1] << "\n";
    std::cerr << "mds truncation residual " << residual << "\n";
    return 0;
  }

  if (bench->parsed()) {
    bmc.validate();
    Range nr = parse_range(nodes_range);
    Range gr = parse_range(genus_range);
    std::ofstream out(bench_out);
    if (!out) {
      std::cerr << "tropaj: cannot open " << bench_out << "\n";
      return kExitData;
    }
    out << "n,g,method,seconds\n";
    std::string method_name =
        bmc.metric == "fz" ? "fz" : bmc.method;
    for (int n = nr.lo; n <= nr.hi; n += nr.step) {
      for (int g = gr.lo; g <= gr.hi; g += gr.step) {
        tropaj_graph* graph_raw = nullptr;
        check(tropaj_graph_gen(n, g, bench_seed, 0.5, 1.5, &graph_raw));
        GraphPtr graph(graph_raw, &tropaj_graph_free);
        tropaj_transform* tr = nullptr;
        // no simplification: the sweep measures cost against the stated n
        check(tropaj_transform_compute(graph.get(), 0, 0, 0, &tr));
        TransformPtr transform(tr, &tropaj_transform_free);
        tropaj_distmat* d = nullptr;
        double seconds = timed_distmat(transform.get(), bmc, &d);
        tropaj_distmat_free(d);
        out << n << "," << g << "," << method_name << "," << seconds << "\n";
        std::cerr << "bench n=" << n << " g=" << g << " " << method_name << " "
                  << seconds << " s\n";
      }
    }
    return 0;
  }

  return kExitUsage;
}
