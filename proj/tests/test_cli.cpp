#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "nsx/csv_out.hpp"
#include "nsx/data.hpp"
#include "nsx/persist.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

// Runs nsx with the given arguments; stdout and stderr go to files in `dir`.
int run_nsx(const fs::path& dir, const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(NSX_BINARY) + "' " + args + " > '" + (dir / "stdout.txt").string() +
                          "' 2> '" + (dir / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kSmall =
    " --set dim=20 --set witness=200 --set eval=400 --set pairs=3000 --set recall_k=20 --set recall_queries=10";

}  // namespace

TEST_CASE("generate, fit and transform") {
  const auto dir = testing::scratch_dir("cli-pipeline");
  const auto out = dir.string();
  REQUIRE(run_nsx(dir, "generate --out " + out + " --set size=500 --set dim=12 -o " + out + "/data.fvecs") == 0);
  const nsx::RowMatrix data = nsx::load_fvecs(dir / "data.fvecs");
  CHECK(data.rows() == 500);
  CHECK(data.cols() == 12);

  for (const std::string method : {"zen", "pca", "rp", "lmds", "mds"}) {
    CAPTURE(method);
    const auto model = out + "/" + method + ".nsx";
    REQUIRE(run_nsx(dir, "fit --out " + out + " --dataset " + out + "/data.fvecs --method " + method +
                         " --dims 5 --set witness=100 -o " + model) == 0);
    REQUIRE(run_nsx(dir, "transform --out " + out + " -t " + model + " -i " + out + "/data.fvecs -o " + out + "/r.csv") == 0);
    const nsx::RowMatrix reduced = nsx::load_csv(dir / "r.csv");
    CHECK(reduced.rows() == 500);
    CHECK(reduced.cols() == 5);
    // The written values match applying the stored transform directly.
    const nsx::RowMatrix direct = nsx::apply_transform(nsx::load_transform(model), data);
    CHECK((reduced - direct).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(run_nsx(dir, "fit --out " + out + " --dataset " + out + "/data.fvecs --method zen,pca --dims 5") == 2);
}

TEST_CASE("profile exit status and flag precedence") {
  const auto dir = testing::scratch_dir("cli-profile");
  const auto out = (dir / "a").string();
  REQUIRE(run_nsx(dir, "profile --out " + out + " --method zen,pca --dims 4" + kSmall) == 0);
  const auto body = nsx::csv_body(dir / "a" / "profile.csv");
  CHECK(body.size() == 3);

  // The environment overrides the config file; flags override both.
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "dims=6\nseed=5\n";
  }
  const auto out_b = (dir / "b").string();
  REQUIRE(run_nsx(dir, "profile --config " + (dir / "run.cfg").string() + " --out " + out_b + " --method pca" + kSmall,
              "NSX_DIMS=3") == 0);
  const auto b = nsx::csv_body(dir / "b" / "profile.csv");
  REQUIRE(b.size() == 2);
  CHECK(b[1].rfind("pca,3,", 0) == 0);
  const std::string text = slurp(dir / "b" / "profile.csv");
  CHECK(text.find("# seed=5") != std::string::npos);
  REQUIRE(run_nsx(dir, "profile --config " + (dir / "run.cfg").string() + " --out " + out_b + " --method pca --dims 2" +
                       kSmall,
              "NSX_DIMS=3") == 0);
  CHECK(nsx::csv_body(dir / "b" / "profile.csv")[1].rfind("pca,2,", 0) == 0);

  // A cell that cannot be produced gives exit status 1 and an NA row.
  CHECK(run_nsx(dir, "profile --out " + out + " --method pca --dims 4,30" + kSmall) == 1);
  CHECK(slurp(dir / "stderr.txt").find("pca") != std::string::npos);
}

TEST_CASE("configuration errors exit with status 2") {
  const auto dir = testing::scratch_dir("cli-errors");
  const auto out = dir.string();
  CHECK(run_nsx(dir, "profile --out " + out + " --set bogus=1") == 2);
  CHECK(slurp(dir / "stderr.txt").find("bogus") != std::string::npos);
  CHECK(run_nsx(dir, "profile --out " + out + " --method tsne") == 2);
  CHECK(run_nsx(dir, "profile --out " + out + " --config " + out + "/missing.cfg") == 2);
  CHECK(run_nsx(dir, "profile --out " + out + " --dataset " + out + "/missing.fvecs") == 2);
  CHECK(run_nsx(dir, "transform --out " + out + " -t " + out + "/missing.nsx") == 2);
  CHECK(run_nsx(dir, "profile --out " + out + kSmall, "NSX_WITNESS=abc") == 2);
  CHECK(run_nsx(dir, "") != 0);
  CHECK(run_nsx(dir, "frobnicate") != 0);
}

TEST_CASE("angles command") {
  const auto dir = testing::scratch_dir("cli-angles");
  REQUIRE(run_nsx(dir, "angles --out " + dir.string() + " --set angle_dims=10,50 --set angle_samples=1000") == 0);
  CHECK(nsx::csv_body(dir / "angles.csv").size() == 3);
}
