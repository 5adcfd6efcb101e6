// nsx: experiment driver for the nSimplex transform and its baselines.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nsx/config.hpp"
#include "nsx/data.hpp"
#include "nsx/errors.hpp"
#include "nsx/experiment.hpp"
#include "nsx/persist.hpp"
#include "nsx/rng.hpp"

namespace {

// Flags shared by every subcommand. Each maps onto a config key and wins
// over the config file and NSX_* environment variables.
struct CommonFlags {
  std::string config_file;
  std::optional<std::string> seed, out, method, dims, metric, dataset, workers;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key=value configuration file");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--out", out, "output directory");
    app->add_option("--method", method, "comma-separated methods: zen,lwb,upb,pca,mds,lmds,rp");
    app->add_option("--dims", dims, "comma-separated target dimensions");
    app->add_option("--metric", metric, "euclidean | cosine | jsd | triangular");
    app->add_option("--dataset", dataset, "uniform | gaussian | path to .fvecs/.csv");
    app->add_option("--workers", workers, "worker threads");
    app->add_option("--set", sets, "override any config key (key=value), repeatable");
  }

  nsx::ExperimentConfig resolve() const {
    nsx::ExperimentConfig c;
    if (!config_file.empty()) c.load_file(config_file);
    c.load_environment();
    const std::pair<const char*, const std::optional<std::string>*> flags[] = {
        {"seed", &seed},     {"out", &out},         {"methods", &method}, {"dims", &dims},
        {"metric", &metric}, {"dataset", &dataset}, {"workers", &workers}};
    for (const auto& [key, value] : flags) {
      if (*value) c.set(key, **value);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw nsx::ConfigError("--set expects key=value, got '" + s + "'");
      c.set(s.substr(0, eq), s.substr(eq + 1));
    }
    return c;
  }
};

int run_generate(const nsx::ExperimentConfig& c, const std::string& output) {
  const nsx::Index n = c.size > 0 ? c.size : 10000;
  const nsx::Dataset d = nsx::experiment_dataset(c, n);
  const std::filesystem::path path = output.empty() ? c.out / (d.name + ".fvecs") : std::filesystem::path(output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  nsx::write_rows(path, d.rows);
  std::cout << path.string() << '\n';
  return 0;
}

int run_fit(const nsx::ExperimentConfig& c, const std::string& output) {
  const auto methods = c.method_list(true);
  if (c.methods.size() != 1) throw nsx::ConfigError("fit needs exactly one --method");
  const nsx::Dataset d = nsx::experiment_dataset(c, c.witness);
  const nsx::Index k = c.target_dims(d.dim()).front();
  const auto split = nsx::sample_witness(d.size(), c.witness, 0, nsx::derive_seed(c.seed, nsx::name_tag("split")));
  const nsx::FitContext ctx(nsx::select_rows(d.rows, split.witness), d.metric, c.seed, methods, c.lmds_landmarks);
  const auto r = ctx.fit(methods.front(), k);
  const std::filesystem::path path =
      output.empty() ? c.out / (methods.front() + "-k" + std::to_string(k) + ".nsx") : std::filesystem::path(output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  nsx::save_transform(path, r.transform);
  std::cout << path.string() << '\n';
  return 0;
}

int run_transform(const nsx::ExperimentConfig& c, const std::string& transform_path, const std::string& input,
                  const std::string& output) {
  const auto t = nsx::load_transform(transform_path);
  const std::string source = input.empty() ? c.dataset : input;
  nsx::RowMatrix rows = nsx::load_rows(source);
  const nsx::Metric& metric = std::visit(
      [](const auto& x) -> const nsx::Metric& {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, nsx::NSimplexTransform>) {
          return x.metric();
        } else {
          return x.metric;
        }
      },
      t);
  if (metric.requires_probability_input()) rows = nsx::l1_normalize(rows);
  const nsx::RowMatrix reduced = nsx::apply_transform(t, rows);
  const std::filesystem::path path = output.empty() ? c.out / "reduced.csv" : std::filesystem::path(output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  nsx::write_rows(path, reduced);
  std::cout << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsx: nSimplex dimensionality reduction experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string output, transform_path, input;

  auto* shepard = app.add_subcommand("shepard", "Shepard scatter, isotonic fit and Kruskal stress");
  auto* profile = app.add_subcommand("profile", "quality measures over target dimensions");
  auto* recall = app.add_subcommand("recall", "kNN recall against cached ground truth");
  auto* angles = app.add_subcommand("angles", "angle concentration experiment");
  auto* bench = app.add_subcommand("bench", "fit and transform timings");
  auto* generate = app.add_subcommand("generate", "write a generated dataset");
  auto* fit = app.add_subcommand("fit", "fit one transform and save it");
  auto* transform = app.add_subcommand("transform", "apply a saved transform to a data file");
  for (auto* sub : {shepard, profile, recall, angles, bench, generate, fit, transform}) flags.attach(sub);
  generate->add_option("-o,--output", output, "output file (.fvecs or .csv)");
  fit->add_option("-o,--output", output, "output transform file");
  transform->add_option("-t,--transform", transform_path, "saved transform")->required();
  transform->add_option("-i,--input", input, "input data file (.fvecs or .csv)");
  transform->add_option("-o,--output", output, "output file (.fvecs or .csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    const nsx::ExperimentConfig config = flags.resolve();
    std::filesystem::create_directories(config.out);
    if (shepard->parsed()) return nsx::cmd_shepard(config, std::cerr);
    if (profile->parsed()) return nsx::cmd_profile(config, std::cerr);
    if (recall->parsed()) return nsx::cmd_recall(config, std::cerr);
    if (angles->parsed()) return nsx::cmd_angles(config, std::cerr);
    if (bench->parsed()) return nsx::cmd_bench(config, std::cerr);
    if (generate->parsed()) return run_generate(config, output);
    if (fit->parsed()) return run_fit(config, output);
    if (transform->parsed()) return run_transform(config, transform_path, input, output);
  } catch (const std::exception& e) {
    std::cerr << "nsx: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
