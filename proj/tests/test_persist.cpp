#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <iterator>

#include "nsx/data.hpp"
#include "nsx/errors.hpp"
#include "nsx/persist.hpp"
#include "support.hpp"

using namespace nsx;
namespace fs = std::filesystem;

namespace {

std::vector<char> bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<char>& b) {
  std::ofstream out(p, std::ios::binary);
  out.write(b.data(), static_cast<std::streamsize>(b.size()));
}

bool contains(const std::vector<char>& hay, const std::string& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

// Saves, reloads, and checks both transforms produce bit-identical output.
void check_round_trip(const StoredTransform& t, const RowMatrix& objects, const fs::path& path) {
  save_transform(path, t);
  const StoredTransform back = load_transform(path);
  CHECK(back.index() == t.index());
  CHECK(output_dimension(back) == output_dimension(t));
  CHECK(input_dimension(back) == input_dimension(t));
  const RowMatrix a = apply_transform(t, objects);
  const RowMatrix b = apply_transform(back, objects);
  CHECK(a == b);
  // Saving the reloaded transform reproduces the file.
  save_transform(path.string() + ".again", back);
  CHECK(bytes_of(path) == bytes_of(path.string() + ".again"));
}

NSimplexTransform simplex_for(const Metric& metric, const RowMatrix& pool, Index k) {
  Rng rng(7);
  return fit_random_references(pool, k, metric, rng);
}

}  // namespace

TEST_CASE("nsimplex round trips") {
  const auto dir = testing::scratch_dir("persist-ns");
  const RowMatrix pool = gen_uniform(300, 20, 101);
  check_round_trip(simplex_for(Metric::euclidean(), pool, 10), pool, dir / "e.nsx");
  check_round_trip(simplex_for(Metric::cosine(), pool, 8), pool, dir / "c.nsx");
  const Metric qf = Metric::quadratic_form(testing::random_psd(20, 102));
  check_round_trip(simplex_for(qf, pool, 6), pool, dir / "q.nsx");
  const RowMatrix probs = testing::random_probabilities(300, 20, 103);
  check_round_trip(simplex_for(Metric::jensen_shannon(), probs, 12), probs, dir / "j.nsx");
  check_round_trip(simplex_for(Metric::triangular(), probs, 12), probs, dir / "t.nsx");
}

TEST_CASE("linear round trips carry the coordinate metric") {
  const auto dir = testing::scratch_dir("persist-lin");
  const RowMatrix data = gen_uniform(400, 30, 104);
  const LinearReducer pca{Metric::euclidean(), pca_fit(data, 5).transform};
  check_round_trip(pca, data, dir / "pca.nsx");
  CHECK(contains(bytes_of(dir / "pca.nsx"), "euclidean-coordinates"));
  const LinearReducer rp{Metric::cosine(), rp_fit(30, 7, 105)};
  check_round_trip(rp, data, dir / "rp.nsx");
  CHECK(contains(bytes_of(dir / "rp.nsx"), "cosine-coordinates"));
  const LinearReducer qf{Metric::quadratic_form(testing::random_psd(30, 106)), rp_fit(30, 4, 107)};
  check_round_trip(qf, data, dir / "qf.nsx");
}

TEST_CASE("lmds round trip") {
  const auto dir = testing::scratch_dir("persist-lmds");
  const RowMatrix probs = testing::random_probabilities(200, 15, 108);
  const LmdsTransform t = lmds_fit(probs.topRows(60), Metric::jensen_shannon(), 8);
  check_round_trip(t, probs, dir / "l.nsx");
}

TEST_CASE("malformed files") {
  const auto dir = testing::scratch_dir("persist-bad");
  const RowMatrix pool = gen_uniform(100, 6, 109);
  save_transform(dir / "good.nsx", simplex_for(Metric::euclidean(), pool, 4));
  const std::vector<char> good = bytes_of(dir / "good.nsx");
  REQUIRE(good.size() > 16);
  CHECK(std::string(good.begin(), good.begin() + 4) == "NSXF");

  auto corrupt = [&](const std::string& name, std::vector<char> b) {
    write_bytes(dir / name, b);
    CHECK_THROWS_AS(load_transform(dir / name), FormatError);
  };
  {
    auto b = good;
    b[0] = 'X';
    corrupt("magic.nsx", b);
  }
  {
    auto b = good;
    b[4] = 9;  // version
    corrupt("version.nsx", b);
  }
  {
    auto b = good;
    b[8] = 42;  // kind
    corrupt("kind.nsx", b);
  }
  corrupt("short.nsx", {good.begin(), good.end() - 5});
  corrupt("header-only.nsx", {good.begin(), good.begin() + 6});
  {
    auto b = good;
    b.push_back('\0');
    corrupt("trailing.nsx", b);
  }
  {
    // Metric name length far beyond the file.
    auto b = good;
    b[12] = '\x7f';
    b[13] = '\x7f';
    corrupt("length.nsx", b);
  }
  CHECK_THROWS_AS(load_transform(dir / "absent.nsx"), FormatError);
}

TEST_CASE("apply_transform checks the input dimension") {
  const RowMatrix pool = gen_uniform(100, 6, 110);
  const StoredTransform t = simplex_for(Metric::euclidean(), pool, 4);
  CHECK_THROWS_AS(apply_transform(t, gen_uniform(3, 5, 111)), DimensionMismatch);
}
