#include "nsx/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <mutex>
#include <numbers>
#include <ostream>

#include "nsx/baselines.hpp"
#include "nsx/errors.hpp"
#include "nsx/rng.hpp"
#include "nsx/simplex.hpp"

namespace nsx {

namespace {

bool is_simplex_method(const std::string& m) { return m == "zen" || m == "lwb" || m == "upb"; }

Estimator estimator_for(const std::string& m) {
  if (m == "zen") return Estimator::Zen;
  if (m == "lwb") return Estimator::Lwb;
  if (m == "upb") return Estimator::Upb;
  return Estimator::Euclidean;
}

ConstSpan row_of(const RowMatrix& m, Index i) { return row_span(m, i); }

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Provenance provenance_for(const std::string& command, const ExperimentConfig& config, const Dataset* data) {
  Provenance p;
  p.emplace_back("command", command);
  p.emplace_back("timestamp", utc_timestamp());
  if (data) {
    p.emplace_back("dataset_name", data->name);
    p.emplace_back("objects", std::to_string(data->size()));
    p.emplace_back("input_dim", std::to_string(data->dim()));
  }
  for (auto& e : config.entries()) p.push_back(std::move(e));
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// One cell per (method, k), methods outermost.
template <class Cell>
std::vector<Cell> make_cells(const std::vector<std::string>& methods, const std::vector<Index>& dims) {
  std::vector<Cell> cells;
  for (const auto& m : methods) {
    for (Index k : dims) {
      Cell c;
      c.method = m;
      c.k = k;
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

template <class Cell>
bool all_produced(const std::vector<Cell>& cells) {
  return std::all_of(cells.begin(), cells.end(), [](const Cell& c) { return c.error.empty(); });
}

void log_failure(std::ostream& log, std::mutex& mu, const std::string& method, Index k, const std::string& what) {
  std::lock_guard lock(mu);
  log << "cell " << method << " k=" << k << " failed: " << what << '\n';
}

}  // namespace

Vector FittedReducer::apply_one(ConstSpan row) const {
  if (const auto* ns = std::get_if<NSimplexTransform>(&transform)) return ns->transform(row);
  if (const auto* lin = std::get_if<LinearReducer>(&transform)) {
    if (lin->metric.kind() == MetricKind::Euclidean) return apply_linear(lin->transform, row);
    RowMatrix one = Eigen::Map<const RowMatrix>(row.data(), 1, static_cast<Index>(row.size()));
    const auto coords = lin->metric.coordinates(one);
    return apply_linear(lin->transform, row_span(*coords, 0));
  }
  return lmds_transform(std::get<LmdsTransform>(transform), row);
}

double FittedReducer::distance(ConstSpan a, ConstSpan b) const {
  switch (estimator) {
    case Estimator::Lwb: return lwb_distance(a, b);
    case Estimator::Zen: return zen_distance(a, b);
    case Estimator::Upb: return upb_distance(a, b);
    case Estimator::Euclidean: break;
  }
  return euclidean(a, b);
}

std::uint64_t name_tag(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t method_seed(std::uint64_t seed, const std::string& method, Index k) {
  const std::string family = is_simplex_method(method) ? "nsimplex" : method;
  return derive_seed(seed, name_tag(family), static_cast<std::uint64_t>(k));
}

struct FitContext::Shared {
  std::optional<RowMatrix> coords;            // witness in explicit coordinates
  std::optional<ClassicalScaling> witness_cs;  // MDS on the witness distances
  std::optional<ClassicalScaling> landmark_cs;
};

FitContext::FitContext(RowMatrix witness, Metric metric, std::uint64_t seed,
                       const std::vector<std::string>& methods, Index lmds_landmarks)
    : witness_(std::move(witness)),
      metric_(std::move(metric)),
      seed_(seed),
      lmds_landmarks_(lmds_landmarks > 0 ? std::min(lmds_landmarks, witness_.rows()) : witness_.rows()),
      shared_(std::make_unique<Shared>()) {
  auto wants = [&](const char* m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
  shared_->coords = metric_.coordinates(witness_);
  const bool mds = wants("mds") && shared_->coords;
  const bool lmds = wants("lmds");
  if (mds || (lmds && lmds_landmarks_ == witness_.rows())) {
    shared_->witness_cs.emplace(distance_matrix(witness_, metric_));
  }
  if (lmds && lmds_landmarks_ < witness_.rows()) {
    shared_->landmark_cs.emplace(distance_matrix(witness_.topRows(lmds_landmarks_), metric_));
  }
}

FitContext::~FitContext() = default;
FitContext::FitContext(FitContext&&) noexcept = default;

FittedReducer FitContext::fit(const std::string& method, Index k) const {
  FittedReducer r{method, k, LinearReducer{metric_, {}}, estimator_for(method)};
  const std::uint64_t seed = method_seed(seed_, method, k);
  auto need_coords = [&]() -> const RowMatrix& {
    if (!shared_->coords) {
      throw InvalidArgument(method + " needs explicit coordinates, unavailable for the " +
                            std::string(metric_.name()) + " metric");
    }
    return *shared_->coords;
  };
  if (is_simplex_method(method)) {
    Rng rng(seed);
    r.transform = fit_random_references(witness_, k, metric_, rng);
  } else if (method == "pca") {
    r.transform = LinearReducer{metric_, pca_fit(need_coords(), k).transform};
  } else if (method == "rp") {
    r.transform = LinearReducer{metric_, rp_fit(need_coords().cols(), k, seed)};
  } else if (method == "mds") {
    const RowMatrix& coords = need_coords();
    if (k >= witness_.rows()) throw InvalidArgument("mds: k must be below the witness size");
    const RowMatrix emb = shared_->witness_cs ? shared_->witness_cs->embedding(k)
                                               : mds_fit(distance_matrix(witness_, metric_), k).embedding;
    r.transform = LinearReducer{metric_, mds_extend(coords, emb).transform};
  } else if (method == "lmds") {
    RowMatrix landmarks = witness_.topRows(lmds_landmarks_);
    const ClassicalScaling* cs = shared_->landmark_cs ? &*shared_->landmark_cs
                                 : shared_->witness_cs ? &*shared_->witness_cs
                                                       : nullptr;
    r.transform = cs ? lmds_from_scaling(std::move(landmarks), metric_, *cs, k)
                     : lmds_fit(std::move(landmarks), metric_, k);
  } else {
    throw InvalidArgument("unknown method '" + method + "'");
  }
  return r;
}

Dataset experiment_dataset(const ExperimentConfig& config, Index needed) {
  const Metric metric = Metric::from_name(config.metric);
  RowMatrix rows;
  std::string name;
  if (config.dataset == "uniform" || config.dataset == "gaussian") {
    const Index n = config.size > 0 ? config.size : needed;
    const std::uint64_t s = derive_seed(config.seed, name_tag("data"));
    rows = config.dataset == "uniform" ? gen_uniform(n, config.dim, s) : gen_gaussian(n, config.dim, s);
    name = config.dataset + "-d" + std::to_string(config.dim) + "-n" + std::to_string(n) + "-s" +
           std::to_string(config.seed);
  } else {
    rows = load_rows(config.dataset);
    name = std::filesystem::path(config.dataset).stem().string();
  }
  if (rows.rows() < needed) {
    throw ConfigError("dataset " + name + " has " + std::to_string(rows.rows()) + " objects, " +
                      std::to_string(needed) + " needed");
  }
  return make_dataset(std::move(name), std::move(rows), metric);
}

EvalPairs make_eval_pairs(const RowMatrix& rows, const Metric& metric, std::vector<std::pair<Index, Index>> pairs) {
  EvalPairs out;
  out.delta.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.delta[i] = metric(row_of(rows, pairs[i].first), row_of(rows, pairs[i].second));
  }
  out.pairs = std::move(pairs);
  return out;
}

DistancePairSample reduced_sample(const EvalPairs& pairs, const RowMatrix& reduced, const FittedReducer& r) {
  DistancePairSample s;
  s.delta = pairs.delta;
  s.zeta.resize(pairs.pairs.size());
  for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
    s.zeta[i] = r.distance(row_of(reduced, pairs.pairs[i].first), row_of(reduced, pairs.pairs[i].second));
  }
  return s;
}

NeighbourLists reduced_knn(const RowMatrix& reduced, const FittedReducer& r,
                           const std::vector<Index>& query_indices, std::size_t k, unsigned workers) {
  return knn_lists(
      query_indices.size(), reduced.rows(), k,
      [&](std::size_t q, Index j) { return r.distance(row_of(reduced, query_indices[q]), row_of(reduced, j)); },
      [&](std::size_t q) { return query_indices[q]; }, workers);
}

double mean_recall(const NeighbourLists& truth, const NeighbourLists& reduced) {
  if (truth.size() != reduced.size() || truth.empty()) {
    throw InvalidArgument("mean_recall: list counts differ or are empty");
  }
  double acc = 0.0;
  for (std::size_t q = 0; q < truth.size(); ++q) acc += dcg_recall(truth[q], reduced[q]);
  return acc / static_cast<double>(truth.size());
}

// ---------------------------------------------------------------- profile

bool ProfileResult::complete() const { return all_produced(cells); }

ProfileResult run_profile(const ExperimentConfig& config, std::ostream& log) {
  const Dataset data = experiment_dataset(config, config.witness + config.eval);
  const WitnessSplit split = sample_witness(data.size(), config.witness, config.eval,
                                            derive_seed(config.seed, name_tag("split")));
  const RowMatrix eval = select_rows(data.rows, split.evaluation);
  const auto methods = config.method_list(data.metric.coordinates(eval.topRows(1)).has_value());
  const auto dims = config.target_dims(data.dim());

  ProfileResult result;
  result.provenance = provenance_for("profile", config, &data);
  result.cells = make_cells<ProfileCell>(methods, dims);

  const FitContext ctx(select_rows(data.rows, split.witness), data.metric, config.seed, methods,
                       config.lmds_landmarks);
  const EvalPairs pairs = make_eval_pairs(
      eval, data.metric, sample_pairs(eval.rows(), config.pairs, derive_seed(config.seed, name_tag("pairs"))));

  // Recall uses the evaluation set as corpus, with K at most a tenth of it.
  const std::size_t recall_k =
      std::max<std::size_t>(1, std::min<std::size_t>(config.recall_k, static_cast<std::size_t>(eval.rows() / 10)));
  std::vector<Index> queries(static_cast<std::size_t>(std::min(config.recall_queries, eval.rows())));
  for (std::size_t i = 0; i < queries.size(); ++i) queries[i] = static_cast<Index>(i);
  const Dataset eval_set{data.name, eval, data.metric};
  const NeighbourLists truth =
      static_cast<Index>(recall_k) < eval.rows() ? knn_ground_truth(eval_set, queries, recall_k, config.workers)
                                                 : NeighbourLists{};

  std::mutex mu;
  parallel_for(result.cells.size(), config.workers, [&](std::size_t i) {
    ProfileCell& cell = result.cells[i];
    try {
      const FittedReducer r = ctx.fit(cell.method, cell.k);
      const RowMatrix reduced = r.apply(eval);
      QualityReport rep = assess(reduced_sample(pairs, reduced, r));
      if (!truth.empty()) rep.recall = mean_recall(truth, reduced_knn(reduced, r, queries, recall_k, 1));
      cell.report = rep;
    } catch (const std::exception& e) {
      cell.error = e.what();
      log_failure(log, mu, cell.method, cell.k, cell.error);
    }
  });

  std::vector<double> raw;
  for (const auto& c : result.cells) {
    if (c.report) raw.push_back(c.report->quadratic_raw);
  }
  const auto norm = normalize_quadratic_losses(raw);
  std::size_t j = 0;
  for (auto& c : result.cells) {
    if (c.report) c.quadloss_norm = norm[j++];
  }
  return result;
}

void write_profile(const ProfileResult& result, const std::filesystem::path& path) {
  CsvWriter csv(path, result.provenance, {"method", "k", "kruskal", "sammon_norm", "quadloss_norm", "spearman", "recall"});
  for (const auto& c : result.cells) {
    if (!c.report) {
      csv.row({c.method, std::to_string(c.k), "NA", "NA", "NA", "NA", "NA"});
      continue;
    }
    const QualityReport& r = *c.report;
    csv.row({c.method, std::to_string(c.k), format_double(r.kruskal_quality()), format_double(r.sammon_quality()),
             format_double(c.quadloss_norm), format_double(r.spearman_quality()),
             r.recall ? format_double(clamp_unit(*r.recall)) : "NA"});
  }
  csv.close();
}

// ---------------------------------------------------------------- shepard

bool ShepardResult::complete() const { return all_produced(series); }

ShepardResult run_shepard(const ExperimentConfig& config, std::ostream& log) {
  const Dataset data = experiment_dataset(config, config.witness + config.eval);
  if (config.shepard_objects < 2 || config.shepard_objects > config.eval) {
    throw ConfigError("shepard_objects must lie in [2, eval]");
  }
  const WitnessSplit split = sample_witness(data.size(), config.witness, config.eval,
                                            derive_seed(config.seed, name_tag("split")));
  const RowMatrix eval = select_rows(data.rows, split.evaluation);
  const auto methods = config.method_list(data.metric.coordinates(eval.topRows(1)).has_value());
  const Index k = config.target_dims(data.dim()).front();

  ShepardResult result;
  result.provenance = provenance_for("shepard", config, &data);
  result.series = make_cells<ShepardSeries>(methods, {k});

  const FitContext ctx(select_rows(data.rows, split.witness), data.metric, config.seed, methods,
                       config.lmds_landmarks);
  const EvalPairs scatter = make_eval_pairs(eval, data.metric, all_pairs(config.shepard_objects));
  const EvalPairs large = make_eval_pairs(
      eval, data.metric, sample_pairs(eval.rows(), config.pairs, derive_seed(config.seed, name_tag("pairs"))));

  std::mutex mu;
  parallel_for(result.series.size(), config.workers, [&](std::size_t i) {
    ShepardSeries& s = result.series[i];
    try {
      const FittedReducer r = ctx.fit(s.method, s.k);
      const RowMatrix reduced = r.apply(eval);
      DistancePairSample plot = reduced_sample(scatter, reduced, r);
      s.fit = isotonic_fit(plot.zeta, plot.delta);
      s.zeta = std::move(plot.zeta);
      s.delta = std::move(plot.delta);
      s.stress = kruskal_stress(reduced_sample(large, reduced, r));
    } catch (const std::exception& e) {
      s.error = e.what();
      log_failure(log, mu, s.method, s.k, s.error);
    }
  });
  return result;
}

void write_shepard(const ShepardResult& result, const std::filesystem::path& dir) {
  CsvWriter scatter(dir / "shepard_scatter.csv", result.provenance, {"method", "k", "zeta", "delta"});
  CsvWriter fit(dir / "shepard_fit.csv", result.provenance, {"method", "k", "zeta", "fit"});
  CsvWriter stress(dir / "shepard_stress.csv", result.provenance, {"method", "k", "kruskal_stress"});
  for (const auto& s : result.series) {
    const std::string k = std::to_string(s.k);
    for (std::size_t i = 0; i < s.zeta.size(); ++i) {
      scatter.row({s.method, k, format_double(s.zeta[i]), format_double(s.delta[i])});
    }
    std::vector<std::size_t> order(s.zeta.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.zeta[a] < s.zeta[b]; });
    for (std::size_t i : order) fit.row({s.method, k, format_double(s.zeta[i]), format_double(s.fit[i])});
    stress.row({s.method, k, format_cell(s.stress)});
  }
  scatter.close();
  fit.close();
  stress.close();
}

// ---------------------------------------------------------------- recall

bool RecallResult::complete() const { return all_produced(cells); }

RecallResult run_recall(const ExperimentConfig& config, std::ostream& log) {
  if (config.recall_corpus < 10 * static_cast<Index>(config.recall_k)) {
    throw ConfigError("recall_corpus must be at least 10 x recall_k");
  }
  if (config.recall_queries < 1 || config.recall_queries > config.recall_corpus) {
    throw ConfigError("recall_queries must lie in [1, recall_corpus]");
  }
  const Dataset data = experiment_dataset(config, config.witness + config.recall_corpus);
  const WitnessSplit split = sample_witness(data.size(), config.witness, config.recall_corpus,
                                            derive_seed(config.seed, name_tag("recall-split")));
  const Dataset corpus{data.name, select_rows(data.rows, split.evaluation), data.metric};
  const auto methods = config.method_list(data.metric.coordinates(corpus.rows.topRows(1)).has_value());
  const auto dims = config.target_dims(data.dim());

  std::vector<Index> queries(static_cast<std::size_t>(config.recall_queries));
  for (std::size_t i = 0; i < queries.size(); ++i) queries[i] = static_cast<Index>(i);

  RecallResult result;
  result.provenance = provenance_for("recall", config, &data);
  result.cells = make_cells<RecallCell>(methods, dims);

  // Ground truth is the expensive part; keep it on disk.
  const auto cache_file = config.cache_dir() / ("gt-" + data.name + "-" + std::string(data.metric.name()) + "-s" +
                                                std::to_string(config.seed) + "-w" + std::to_string(config.witness) + "-c" +
                                                std::to_string(config.recall_corpus) +
                                                "-q" + std::to_string(queries.size()) + "-k" +
                                                std::to_string(config.recall_k) + ".ivecs");
  NeighbourLists truth;
  if (std::filesystem::exists(cache_file)) {
    truth = load_ivecs(cache_file);
    const bool ok = truth.size() == queries.size() &&
                    std::all_of(truth.begin(), truth.end(), [&](const auto& l) { return l.size() == config.recall_k; });
    if (!ok) throw FormatError(cache_file.string() + ": cached ground truth does not match the configuration");
    for (const auto& l : truth) {
      for (ObjectId id : l) {
        if (static_cast<Index>(id) >= corpus.size()) throw FormatError(cache_file.string() + ": id out of range");
      }
    }
    result.ground_truth_from_cache = true;
  } else {
    truth = knn_ground_truth(corpus, queries, config.recall_k, config.workers);
    std::filesystem::create_directories(cache_file.parent_path());
    const auto tmp = std::filesystem::path(cache_file.string() + ".tmp");
    write_ivecs(tmp, truth);
    std::filesystem::rename(tmp, cache_file);
  }
  result.provenance.emplace_back("ground_truth", cache_file.string());

  const FitContext ctx(select_rows(data.rows, split.witness), data.metric, config.seed, methods,
                       config.lmds_landmarks);
  std::mutex mu;
  for (auto& cell : result.cells) {
    try {
      const FittedReducer r = ctx.fit(cell.method, cell.k);
      const RowMatrix reduced = r.apply(corpus.rows);
      cell.recall = mean_recall(truth, reduced_knn(reduced, r, queries, config.recall_k, config.workers));
    } catch (const std::exception& e) {
      cell.error = e.what();
      log_failure(log, mu, cell.method, cell.k, cell.error);
    }
  }
  return result;
}

void write_recall(const RecallResult& result, const std::filesystem::path& path) {
  CsvWriter csv(path, result.provenance, {"method", "k", "recall"});
  for (const auto& c : result.cells) csv.row({c.method, std::to_string(c.k), format_cell(c.recall)});
  csv.close();
}

// ---------------------------------------------------------------- angles

AngleResult run_angles(const ExperimentConfig& config, std::ostream&) {
  if (config.angle_dims.empty()) throw ConfigError("angle_dims must not be empty");
  AngleResult result;
  result.provenance = provenance_for("angles", config, nullptr);
  result.rows.resize(config.angle_dims.size());
  parallel_for(result.rows.size(), config.workers, [&](std::size_t i) {
    AngleRow& row = result.rows[i];
    row.dim = config.angle_dims[i];
    row.stats = angle_distribution(row.dim, config.angle_samples,
                                   derive_seed(config.seed, name_tag("angles"), static_cast<std::uint64_t>(row.dim)));
    row.histogram.assign(config.bins, 0);
    for (double t : row.stats.angles) {
      auto b = static_cast<std::size_t>(t / std::numbers::pi * static_cast<double>(config.bins));
      ++row.histogram[std::min(b, config.bins - 1)];
    }
  });
  return result;
}

void write_angles(const AngleResult& result, const std::filesystem::path& dir) {
  CsvWriter stats(dir / "angles.csv", result.provenance, {"dim", "mean", "stdev", "samples"});
  CsvWriter hist(dir / "angles_hist.csv", result.provenance, {"dim", "lower", "upper", "count"});
  for (const auto& r : result.rows) {
    stats.row({std::to_string(r.dim), format_double(r.stats.mean), format_double(r.stats.stdev),
               std::to_string(r.stats.angles.size())});
    const double width = std::numbers::pi / static_cast<double>(r.histogram.size());
    for (std::size_t b = 0; b < r.histogram.size(); ++b) {
      hist.row({std::to_string(r.dim), format_double(static_cast<double>(b) * width),
                format_double(static_cast<double>(b + 1) * width), std::to_string(r.histogram[b])});
    }
  }
  stats.close();
  hist.close();
}

// ---------------------------------------------------------------- bench

bool BenchResult::complete() const { return all_produced(cells); }

BenchResult run_bench(const ExperimentConfig& config, std::ostream& log) {
  const Dataset data = experiment_dataset(config, config.witness + config.bench_objects);
  const WitnessSplit split = sample_witness(data.size(), config.witness, config.bench_objects,
                                            derive_seed(config.seed, name_tag("split")));
  const RowMatrix witness = select_rows(data.rows, split.witness);
  const RowMatrix objects = select_rows(data.rows, split.evaluation);
  const auto methods = config.method_list(data.metric.coordinates(objects.topRows(1)).has_value());
  const auto dims = config.target_dims(data.dim());
  const double n = static_cast<double>(objects.rows());

  BenchResult result;
  result.provenance = provenance_for("bench", config, &data);
  result.cells = make_cells<BenchCell>(methods, dims);

  // Timings run on one thread so cells do not compete for cores.
  std::mutex mu;
  for (auto& cell : result.cells) {
    try {
      std::vector<double> fit_t, loop_t, batch_t;
      std::optional<FittedReducer> r;
      for (int rep = 0; rep < config.reps; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        FitContext ctx(witness, data.metric, config.seed, {cell.method}, config.lmds_landmarks);
        r.emplace(ctx.fit(cell.method, cell.k));
        fit_t.push_back(seconds_since(t0));
      }
      double sink = 0.0;
      for (int rep = 0; rep < config.reps; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        for (Index i = 0; i < objects.rows(); ++i) sink += r->apply_one(row_span(objects, i))[0];
        loop_t.push_back(seconds_since(t0) / n);
        t0 = std::chrono::steady_clock::now();
        sink += r->apply(objects)(0, 0);
        batch_t.push_back(seconds_since(t0) / n);
      }
      if (!std::isfinite(sink)) throw InternalError("non-finite transform output");
      cell.fit_seconds = median(fit_t);
      cell.looped_per_object = median(loop_t);
      cell.batch_per_object = median(batch_t);
    } catch (const std::exception& e) {
      cell.error = e.what();
      log_failure(log, mu, cell.method, cell.k, cell.error);
    }
  }
  return result;
}

void write_bench(const BenchResult& result, const std::filesystem::path& path) {
  CsvWriter csv(path, result.provenance,
                {"method", "k", "fit_seconds", "looped_seconds_per_object", "batch_seconds_per_object"});
  for (const auto& c : result.cells) {
    csv.row({c.method, std::to_string(c.k), format_cell(c.fit_seconds), format_cell(c.looped_per_object),
             format_cell(c.batch_per_object)});
  }
  csv.close();
}

// ---------------------------------------------------------------- commands

int cmd_profile(const ExperimentConfig& config, std::ostream& log) {
  const auto r = run_profile(config, log);
  write_profile(r, config.out / "profile.csv");
  return r.complete() ? 0 : 1;
}

int cmd_shepard(const ExperimentConfig& config, std::ostream& log) {
  const auto r = run_shepard(config, log);
  write_shepard(r, config.out);
  for (const auto& s : r.series) {
    log << s.method << " k=" << s.k << " kruskal_stress=" << format_cell(s.stress) << '\n';
  }
  return r.complete() ? 0 : 1;
}

int cmd_recall(const ExperimentConfig& config, std::ostream& log) {
  const auto r = run_recall(config, log);
  write_recall(r, config.out / "recall.csv");
  return r.complete() ? 0 : 1;
}

int cmd_angles(const ExperimentConfig& config, std::ostream& log) {
  write_angles(run_angles(config, log), config.out);
  return 0;
}

int cmd_bench(const ExperimentConfig& config, std::ostream& log) {
  const auto r = run_bench(config, log);
  write_bench(r, config.out / "bench.csv");
  return r.complete() ? 0 : 1;
}

}  // namespace nsx
