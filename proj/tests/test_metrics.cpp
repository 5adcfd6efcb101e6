#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nsx/errors.hpp"
#include "nsx/metrics.hpp"
#include "support.hpp"

using namespace nsx;
using testing::random_probability;
using testing::random_vector;

namespace {

ConstSpan sp(const std::vector<double>& v) { return {v.data(), v.size()}; }

// Oracles deliberately written differently from the library.

double euclid_oracle(ConstSpan u, ConstSpan v) {
  long double acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += (long double)(u[i] - v[i]) * (u[i] - v[i]);
  return static_cast<double>(std::sqrt(acc));
}

// 1 - 1/2 sum (h(v)+h(w)-h(v+w)), h(x) = -x log2 x.
double jsd_oracle(ConstSpan u, ConstSpan v) {
  auto h = [](long double x) -> long double { return x > 0 ? -x * std::log2(x) : 0.0L; };
  long double acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += h(u[i]) + h(v[i]) - h((long double)u[i] + v[i]);
  return static_cast<double>(std::sqrt(std::max(0.0L, 1.0L - 0.5L * acc)));
}

double qf_oracle(const Matrix& m, ConstSpan u, ConstSpan v) {
  long double acc = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) acc += (long double)(u[i] - v[i]) * m(i, j) * (u[j] - v[j]);
  }
  return static_cast<double>(std::sqrt(std::max(0.0L, acc)));
}

}  // namespace

TEST_CASE("euclidean examples") {
  CHECK(euclidean(sp({0, 0}), sp({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  const std::vector<double> u = {0.3, -2.0, 7.5};
  CHECK(euclidean(sp(u), sp(u)) == 0.0);
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const Vector a = random_vector(rng, 10), b = random_vector(rng, 10);
    CHECK(std::abs(euclidean(as_span(a), as_span(b)) - euclid_oracle(as_span(a), as_span(b))) < 1e-12);
  }
  CHECK_THROWS_AS(euclidean(sp({1, 2}), sp({1, 2, 3})), DimensionMismatch);
}

TEST_CASE("cosine examples") {
  const std::vector<double> v = {0.2, 1.5, -3.0};
  const std::vector<double> v2 = {0.4, 3.0, -6.0};
  CHECK(cosine_l2normed(sp(v), sp(v2)) < 1e-15);
  CHECK(cosine_l2normed(sp({1, 0}), sp({0, 1})) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    Vector a = random_vector(rng, 8).array() - 0.5, b = random_vector(rng, 8).array() - 0.5;
    const double theta = std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0));
    CHECK(std::abs(cosine_l2normed(as_span(a), as_span(b)) - 2.0 * std::sin(theta / 2.0)) < 1e-10);
  }
  CHECK(cosine_l2normed(sp({1, 0}), sp({-1, 0})) <= 2.0);
  CHECK_THROWS_AS(cosine_l2normed(sp({0, 0}), sp({1, 0})), DomainError);
}

TEST_CASE("jensen-shannon examples") {
  const std::vector<double> p = {0.1, 0.2, 0.7};
  CHECK(jensen_shannon(sp(p), sp(p)) == 0.0);
  CHECK(jensen_shannon(sp({1, 0}), sp({0, 1})) == doctest::Approx(1.0).epsilon(1e-15));
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const Vector a = random_probability(rng, 20), b = random_probability(rng, 20);
    CHECK(std::abs(jensen_shannon(as_span(a), as_span(b)) - jsd_oracle(as_span(a), as_span(b))) < 1e-12);
  }
  // Zero components follow the 0 log 0 = 0 convention.
  CHECK(jensen_shannon(sp({0.5, 0.5, 0}), sp({0, 0.5, 0.5})) ==
        doctest::Approx(jsd_oracle(sp({0.5, 0.5, 0}), sp({0, 0.5, 0.5}))).epsilon(1e-12));
}

TEST_CASE("probability metrics reject bad domains") {
  CHECK_THROWS_AS(jensen_shannon(sp({0.5, 0.6}), sp({0.5, 0.5})), DomainError);
  CHECK_THROWS_AS(jensen_shannon(sp({1.5, -0.5}), sp({0.5, 0.5})), DomainError);
  CHECK_THROWS_AS(triangular(sp({0.5, 0.6}), sp({0.5, 0.5})), DomainError);
  // Within tolerance of 1: accepted.
  CHECK_NOTHROW(jensen_shannon(sp({0.5, 0.5 + 1e-10}), sp({0.5, 0.5})));
  CHECK_THROWS_AS(jensen_shannon(sp({1, 0}), sp({1, 0, 0})), DimensionMismatch);
}

TEST_CASE("triangular examples") {
  CHECK(triangular(sp({1, 0}), sp({0, 1})) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> p = {0.25, 0.25, 0.5};
  CHECK(triangular(sp(p), sp(p)) == 0.0);
}

TEST_CASE("triangular tracks jensen-shannon on 100-d probability vectors") {
  // Measured relation on uniform-derived probability vectors: triangular is
  // above JSD by a nearly constant factor, leaving a gap of about 0.04.
  Rng rng(14);
  double gap_sum = 0.0, gap_max = 0.0;
  const int n = 2000;
  for (int t = 0; t < n; ++t) {
    const Vector a = random_probability(rng, 100), b = random_probability(rng, 100);
    const double j = jensen_shannon(as_span(a), as_span(b));
    const double tri = triangular(as_span(a), as_span(b));
    CHECK(tri >= j);
    gap_sum += tri - j;
    gap_max = std::max(gap_max, tri - j);
  }
  const double mean_gap = gap_sum / n;
  MESSAGE("mean triangular - JSD gap " << mean_gap << ", max " << gap_max);
  CHECK(mean_gap < 0.05);
  CHECK(gap_max < 0.06);
}

TEST_CASE("quadratic form examples") {
  const Metric id = Metric::quadratic_form(Matrix::Identity(2, 2));
  CHECK(id(sp({0, 0}), sp({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 1;
  CHECK(Metric::quadratic_form(d)(sp({0, 0}), sp({1, 0})) == doctest::Approx(2.0).epsilon(1e-15));
  const Matrix m = testing::random_psd(6, 15);
  const Metric qf = Metric::quadratic_form(m);
  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    const Vector a = random_vector(rng, 6), b = random_vector(rng, 6);
    CHECK(testing::rel_err(qf(as_span(a), as_span(b)), qf_oracle(m, as_span(a), as_span(b))) < 1e-10);
  }
}

TEST_CASE("quadratic form construction is validated") {
  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;  // eigenvalue -1
  CHECK_THROWS_AS(Metric::quadratic_form(bad), DomainError);
  Matrix asym(2, 2);
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(Metric::quadratic_form(asym), DomainError);
  CHECK_THROWS_AS(Metric::quadratic_form(Matrix(2, 3)), DomainError);
}

TEST_CASE("metric names") {
  CHECK(Metric::from_name("euclidean").name() == "euclidean");
  CHECK(Metric::from_name("l2").kind() == MetricKind::Euclidean);
  CHECK(Metric::from_name("jsd").name() == "jensen-shannon");
  CHECK(Metric::from_name("jensen-shannon").kind() == MetricKind::JensenShannon);
  CHECK(Metric::from_name("cosine").kind() == MetricKind::CosineL2Normed);
  CHECK(Metric::from_name("triangular").kind() == MetricKind::Triangular);
  CHECK_THROWS_AS(Metric::from_name("manhattan"), InvalidArgument);
  CHECK_THROWS_AS(Metric::from_name("quadratic-form"), InvalidArgument);
}

namespace {

std::vector<Metric> all_metrics() {
  return {Metric::euclidean(), Metric::cosine(), Metric::jensen_shannon(), Metric::triangular(),
          Metric::quadratic_form(testing::random_psd(12, 17))};
}

Vector domain_point(const Metric& m, Rng& rng) {
  return m.requires_probability_input() ? random_probability(rng, 12) : random_vector(rng, 12);
}

}  // namespace

TEST_CASE("symmetry, identity and triangle inequality for every metric") {
  for (const Metric& m : all_metrics()) {
    CAPTURE(m.name());
    Rng rng(18);
    for (int t = 0; t < 1000; ++t) {
      const Vector a = domain_point(m, rng), b = domain_point(m, rng), c = domain_point(m, rng);
      const double ab = m(as_span(a), as_span(b)), ba = m(as_span(b), as_span(a));
      REQUIRE(ab == ba);  // bit-for-bit
      REQUIRE(ab >= 0.0);
      REQUIRE(m(as_span(a), as_span(a)) < 1e-7);
      const double bc = m(as_span(b), as_span(c)), ac = m(as_span(a), as_span(c));
      REQUIRE(ac <= ab + bc + 1e-12);
    }
  }
}

TEST_CASE("explicit coordinates reproduce the metric") {
  Rng rng(19);
  RowMatrix rows(20, 12);
  for (Index i = 0; i < rows.size(); ++i) rows.data()[i] = rng.uniform();
  for (const Metric& m : all_metrics()) {
    CAPTURE(m.name());
    const auto coords = m.coordinates(m.requires_probability_input() ? l1_normalize(rows) : rows);
    if (m.requires_probability_input()) {
      CHECK_FALSE(coords.has_value());
      continue;
    }
    REQUIRE(coords.has_value());
    for (Index i = 0; i + 1 < rows.rows(); ++i) {
      CHECK(std::abs(euclidean(row_span(*coords, i), row_span(*coords, i + 1)) - m.distance(rows, i, i + 1)) < 1e-10);
    }
  }
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(Metric::jensen_shannon().check_domain(sp({0.7, 0.7})), DomainError);
  CHECK_NOTHROW(Metric::jensen_shannon().check_domain(sp({0.3, 0.7})));
  CHECK_THROWS_AS(Metric::cosine().check_domain(sp({0, 0})), DomainError);
  CHECK_THROWS_AS(Metric::euclidean().check_domain(sp({0, NAN})), DomainError);
}
