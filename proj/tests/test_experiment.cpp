#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nsx/errors.hpp"
#include "nsx/experiment.hpp"
#include "support.hpp"

using namespace nsx;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const std::string& name) {
  ExperimentConfig c;
  c.dim = 20;
  c.witness = 200;
  c.eval = 500;
  c.pairs = 5000;
  c.shepard_objects = 20;
  c.recall_corpus = 600;
  c.recall_queries = 20;
  c.recall_k = 50;
  c.reps = 1;
  c.bench_objects = 50;
  c.angle_dims = {10, 100};
  c.angle_samples = 2000;
  c.bins = 10;
  c.out = testing::scratch_dir(name);
  return c;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("config keys and values") {
  ExperimentConfig c;
  c.set("witness", "250");
  c.set("dims", "10, 20,10");
  c.set("method", "zen,pca");
  c.set("seed", "42");
  c.set("out", "somewhere");
  CHECK(c.witness == 250);
  CHECK(c.seed == 42);
  CHECK(c.methods == std::vector<std::string>{"zen", "pca"});
  CHECK(c.target_dims(100) == std::vector<Index>{20, 10});
  CHECK(c.cache_dir() == fs::path("somewhere") / "cache");
  CHECK_THROWS_AS(c.set("nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(c.set("witness", "12x"), ConfigError);
  CHECK_THROWS_AS(c.set("witness", "-3"), ConfigError);
  CHECK_THROWS_AS(c.set("methods", "zen,tsne"), ConfigError);
  CHECK_THROWS_AS(c.set("dims", "0"), ConfigError);

  // Every key written by entries() reads back to the same value.
  ExperimentConfig copy;
  for (const auto& [k, v] : c.entries()) copy.set(k, v);
  CHECK(copy.entries() == c.entries());
  CHECK(c.entries().size() == ExperimentConfig::keys().size());
}

TEST_CASE("automatic dimensions and methods") {
  ExperimentConfig c;
  CHECK(c.target_dims(100) == std::vector<Index>{80, 40, 20, 10, 5, 2});
  CHECK(c.target_dims(500) == std::vector<Index>{400, 200, 100, 50, 25, 2});
  CHECK(c.target_dims(20) == std::vector<Index>{16, 8, 4, 2});
  CHECK(c.method_list(true) == kAllMethods);
  CHECK(c.method_list(false) == std::vector<std::string>{"zen", "lwb", "upb", "lmds"});
}

TEST_CASE("config file and environment") {
  const auto dir = testing::scratch_dir("config");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# comment\n\nwitness = 300\nmetric=jsd\ndims=5,3\n";
  }
  ExperimentConfig c;
  c.load_file(dir / "run.cfg");
  CHECK(c.witness == 300);
  CHECK(c.metric == "jsd");
  CHECK(c.dims == std::vector<Index>{5, 3});
  ::setenv("NSX_WITNESS", "321", 1);
  c.load_environment();
  ::unsetenv("NSX_WITNESS");
  CHECK(c.witness == 321);
  {
    std::ofstream f(dir / "bad.cfg");
    f << "witness 300\n";
  }
  CHECK_THROWS_AS(c.load_file(dir / "bad.cfg"), ConfigError);
  CHECK_THROWS_AS(c.load_file(dir / "missing.cfg"), ConfigError);
}

TEST_CASE("number formatting round trips") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.uniform() * 60) - 30);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_cell(std::nullopt) == "NA");
}

TEST_CASE("seed derivation") {
  CHECK(name_tag("zen") != name_tag("pca"));
  CHECK(method_seed(1, "zen", 10) == method_seed(1, "lwb", 10));
  CHECK(method_seed(1, "zen", 10) == method_seed(1, "upb", 10));
  CHECK(method_seed(1, "zen", 10) != method_seed(1, "zen", 11));
  CHECK(method_seed(1, "pca", 10) != method_seed(1, "rp", 10));
}

TEST_CASE("fit context") {
  const RowMatrix w = gen_uniform(100, 10, 120);
  const FitContext ctx(w, Metric::euclidean(), 1, kAllMethods);
  for (const auto& m : kAllMethods) {
    const FittedReducer r = ctx.fit(m, 4);
    const RowMatrix out = r.apply(w);
    CHECK(out.cols() == 4);
    for (Index i = 0; i < 5; ++i) CHECK((r.apply_one(row_span(w, i)).transpose() - out.row(i)).norm() == 0.0);
  }
  // zen, lwb and upb reduce to the same coordinates.
  CHECK(ctx.fit("zen", 6).apply(w) == ctx.fit("upb", 6).apply(w));
  CHECK_THROWS_AS(ctx.fit("tsne", 4), InvalidArgument);
  const FitContext jsd(testing::random_probabilities(100, 10, 121), Metric::jensen_shannon(), 1, {"zen", "pca"});
  CHECK_THROWS_AS(jsd.fit("pca", 4), InvalidArgument);
  CHECK(jsd.fit("zen", 4).k == 4);
}

TEST_CASE("profile output") {
  ExperimentConfig c = small_config("profile");
  CHECK(cmd_profile(c, std::cerr) == 0);
  const auto body = csv_body(c.out / "profile.csv");
  REQUIRE(body.size() == 1 + 7 * 4);
  CHECK(body[0] == "method,k,kruskal,sammon_norm,quadloss_norm,spearman,recall");
  for (std::size_t i = 1; i < body.size(); ++i) {
    const auto cells = split(body[i]);
    REQUIRE(cells.size() == 7);
    for (std::size_t j = 2; j < 7; ++j) {
      const double v = std::stod(cells[j]);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  // Provenance block precedes the body.
  std::ifstream in(c.out / "profile.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# ", 0) == 0);

  ExperimentConfig threaded = c;
  threaded.workers = 3;
  threaded.out = testing::scratch_dir("profile-threaded");
  CHECK(cmd_profile(threaded, std::cerr) == 0);
  CHECK(csv_body(threaded.out / "profile.csv") == body);
}

TEST_CASE("profile reports a failing cell and keeps going") {
  ExperimentConfig c = small_config("profile-fail");
  c.methods = {"zen", "pca"};
  c.dims = {4, 30};  // beyond the input dimension neither method can fit
  std::ostringstream log;
  CHECK(cmd_profile(c, log) != 0);
  CHECK(log.str().find("pca") != std::string::npos);
  const auto body = csv_body(c.out / "profile.csv");
  REQUIRE(body.size() == 5);
  for (std::size_t i = 1; i < body.size(); ++i) {
    const bool failed = body[i].find(",30,") != std::string::npos;
    CHECK((body[i].find("NA") != std::string::npos) == failed);
  }
}

TEST_CASE("profile on a metric without coordinates") {
  ExperimentConfig c = small_config("profile-jsd");
  c.metric = "jsd";
  c.dims = {8};
  CHECK(cmd_profile(c, std::cerr) == 0);
  const auto body = csv_body(c.out / "profile.csv");
  CHECK(body.size() == 5);  // zen lwb upb lmds
}

TEST_CASE("shepard output") {
  ExperimentConfig c = small_config("shepard");
  c.methods = {"pca", "zen"};
  c.dims = {20};
  const ShepardResult r = run_shepard(c, std::cerr);
  REQUIRE(r.series.size() == 2);
  for (const auto& s : r.series) {
    CHECK(s.zeta.size() == 190);
    CHECK(s.fit.size() == 190);
    REQUIRE(s.stress.has_value());
  }
  // pca at k = m is a rotation.
  CHECK(*r.series[0].stress < 1e-9);
  write_shepard(r, c.out);
  CHECK(csv_body(c.out / "shepard_scatter.csv").size() == 381);
  const auto fit = csv_body(c.out / "shepard_fit.csv");
  CHECK(fit.size() == 381);
  CHECK(csv_body(c.out / "shepard_stress.csv").size() == 3);
}

TEST_CASE("recall with cached ground truth") {
  ExperimentConfig c = small_config("recall");
  c.methods = {"pca", "rp"};
  c.dims = {20, 2};
  const RecallResult first = run_recall(c, std::cerr);
  CHECK_FALSE(first.ground_truth_from_cache);
  REQUIRE(first.cells.size() == 4);
  REQUIRE(first.cells[0].recall.has_value());
  CHECK(std::abs(*first.cells[0].recall - 1.0) < 1e-6);  // lossless
  CHECK(*first.cells[1].recall < 1.0);
  const RecallResult second = run_recall(c, std::cerr);
  CHECK(second.ground_truth_from_cache);
  for (std::size_t i = 0; i < 4; ++i) CHECK(first.cells[i].recall == second.cells[i].recall);

  c.recall_k = 100;
  CHECK_THROWS_AS(run_recall(c, std::cerr), ConfigError);
}

TEST_CASE("angles output") {
  ExperimentConfig c = small_config("angles");
  const AngleResult r = run_angles(c, std::cerr);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].stats.stdev > r.rows[1].stats.stdev);
  std::size_t total = 0;
  for (auto n : r.rows[1].histogram) total += n;
  CHECK(total == 2000);
  write_angles(r, c.out);
  CHECK(csv_body(c.out / "angles.csv").size() == 3);
  CHECK(csv_body(c.out / "angles_hist.csv").size() == 21);
}

TEST_CASE("bench timings") {
  ExperimentConfig c = small_config("bench");
  c.dim = 1000;
  c.witness = 500;
  c.bench_objects = 200;
  c.reps = 5;
  c.methods = {"zen", "pca"};
  c.dims = {50, 100, 200, 400};
  const BenchResult r = run_bench(c, std::cerr);
  REQUIRE(r.complete());
  std::vector<double> ks, zen;
  for (const auto& cell : r.cells) {
    if (cell.method == "zen") {
      ks.push_back(static_cast<double>(cell.k));
      zen.push_back(*cell.looped_per_object);
      if (cell.k == 200) CHECK(*cell.looped_per_object < 1e-2);
    } else {
      CHECK(*cell.batch_per_object < *cell.looped_per_object);
    }
  }
  // Least-squares line through (k, seconds per object).
  REQUIRE(ks.size() == 4);
  const double n = 4, sx = ks[0] + ks[1] + ks[2] + ks[3];
  double sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 4; ++i) {
    sy += zen[i];
    sxx += ks[i] * ks[i];
    sxy += ks[i] * zen[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < 4; ++i) {
    ss_res += std::pow(zen[i] - (icept + slope * ks[i]), 2);
    ss_tot += std::pow(zen[i] - sy / n, 2);
  }
  MESSAGE("zen per-object seconds: " << zen[0] << " " << zen[1] << " " << zen[2] << " " << zen[3]);
  CHECK(1.0 - ss_res / ss_tot > 0.95);
  write_bench(r, c.out / "bench.csv");
  CHECK(csv_body(c.out / "bench.csv")[0] == "method,k,fit_seconds,looped_seconds_per_object,batch_seconds_per_object");
}

TEST_CASE("zen dominates pca on kruskal quality at every dimension") {
  ExperimentConfig c;
  c.eval = 2000;
  c.pairs = 20000;
  c.methods = {"zen", "pca"};
  c.out = testing::scratch_dir("dominance");
  const ProfileResult r = run_profile(c, std::cerr);
  REQUIRE(r.complete());
  for (Index k : c.target_dims(100)) {
    double zen = -1, pca = -1;
    for (const auto& cell : r.cells) {
      if (cell.k != k) continue;
      (cell.method == "zen" ? zen : pca) = cell.report->kruskal_quality();
    }
    CAPTURE(k);
    CHECK(zen > pca);
  }
}

TEST_CASE("shepard stress orders zen below pca at k = 80") {
  ExperimentConfig c;
  c.eval = 2000;
  c.pairs = 20000;
  c.methods = {"zen", "pca"};
  c.dims = {80};
  c.out = testing::scratch_dir("shepard-order");
  const ShepardResult r = run_shepard(c, std::cerr);
  REQUIRE(r.complete());
  CHECK(*r.series[0].stress < *r.series[1].stress);
}
