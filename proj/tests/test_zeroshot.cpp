#include "doctest.h"

#include <cmath>
#include <random>

#include "attrdisc/errors.hpp"
#include "attrdisc/zeroshot.hpp"
#include "synthetic.hpp"

using namespace attrdisc;

namespace {

AssociationMatrix binary_assoc(std::vector<std::vector<double>> values) {
  AssociationMatrix assoc;
  assoc.mode = AssocMode::SignedBinary;
  assoc.values = std::move(values);
  for (std::size_t c = 0; c < assoc.values.size(); ++c)
    assoc.class_ids.push_back("c" + std::to_string(c));
  for (std::size_t a = 0; a < assoc.values[0].size(); ++a)
    assoc.attribute_words.push_back("a" + std::to_string(a));
  return assoc;
}

Matrix rows(std::vector<std::vector<double>> data) {
  Matrix m(data.size(), data[0].size());
  for (std::size_t r = 0; r < data.size(); ++r)
    for (std::size_t c = 0; c < data[r].size(); ++c) m.at(r, c) = data[r][c];
  return m;
}

}  // namespace

TEST_CASE("normalizer mean and sample std by hand") {
  const ScoreNormalizer norm = fit_normalizer(rows({{0.2}, {0.8}}), "reference");
  CHECK(norm.mean[0] == doctest::Approx(0.5).epsilon(1e-12));
  // sample standard deviation with one degree of freedom
  CHECK(norm.std[0] == doctest::Approx(std::sqrt(0.18)).epsilon(1e-12));
  CHECK(!norm.degenerate[0]);
  CHECK(norm.source == "reference");
}

TEST_CASE("constant attribute column is flagged and left unscaled") {
  const ScoreNormalizer norm = fit_normalizer(rows({{0.3, 0.1}, {0.3, 0.9}}), "batch");
  CHECK(norm.degenerate[0]);
  CHECK(norm.std[0] == 1.0);
  CHECK(!norm.degenerate[1]);
  const Matrix out = normalize_scores(norm, rows({{0.7, 0.5}}));
  CHECK(out.at(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("normalizer needs at least two samples") {
  CHECK_THROWS_AS(fit_normalizer(rows({{0.5}}), "reference"), Error);
}

TEST_CASE("normalized fitting scores have zero mean and unit sample variance") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix scores(20, 3);
  for (auto& v : scores.data) v = unit(rng);
  const ScoreNormalizer norm = fit_normalizer(scores, "reference");
  const Matrix out = normalize_scores(norm, scores);
  for (std::size_t a = 0; a < 3; ++a) {
    double mean = 0.0;
    for (std::size_t s = 0; s < out.rows; ++s) mean += out.at(s, a);
    mean /= static_cast<double>(out.rows);
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
    double var = 0.0;
    for (std::size_t s = 0; s < out.rows; ++s)
      var += (out.at(s, a) - mean) * (out.at(s, a) - mean);
    var /= static_cast<double>(out.rows - 1);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("binary dap score by hand") {
  const auto assoc = binary_assoc({{1.0, 1.0, -1.0}, {-1.0, -1.0, 1.0}});
  const auto scores = dap_score({0.4, 0.6, -0.5}, assoc);
  CHECK(scores[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(scores[1] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("continuous dap score is a weighted mean") {
  AssociationMatrix assoc = binary_assoc({{0.5, 1.0, 0.0}});
  assoc.mode = AssocMode::Continuous;
  const auto scores = dap_score({0.3, 0.8, 100.0}, assoc);
  CHECK(scores[0] == doctest::Approx((0.5 * 0.3 + 1.0 * 0.8) / 1.5).epsilon(1e-12));
}

TEST_CASE("class with no active attribute scores minus infinity") {
  const auto assoc = binary_assoc({{-1.0, -1.0}, {1.0, -1.0}});
  const auto scores = dap_score({2.0, 3.0}, assoc);
  CHECK(std::isinf(scores[0]));
  CHECK(scores[0] < 0.0);
  CHECK(scores[1] == doctest::Approx(2.0));
}

TEST_CASE("dap ranking is invariant to a constant shift of all scores") {
  const auto assoc =
      binary_assoc({{1.0, -1.0, 1.0}, {-1.0, 1.0, 1.0}, {1.0, 1.0, -1.0}});
  const std::vector<double> base = {0.7, -0.1, 0.4};
  std::vector<double> shifted = base;
  for (auto& v : shifted) v += 3.0;
  const auto a = dap_score(base, assoc);
  const auto b = dap_score(shifted, assoc);
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      CHECK((a[i] < a[j]) == (b[i] < b[j]));
}

TEST_CASE("dap score is bounded by the extreme attribute scores") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores(6);
    double lo = 1e300, hi = -1e300;
    for (auto& v : scores) {
      v = unit(rng);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::vector<std::vector<double>> row(1, std::vector<double>(6));
    bool any = false;
    for (auto& v : row[0]) {
      v = (rng() % 2) ? 1.0 : -1.0;
      any = any || v > 0;
    }
    if (!any) row[0][0] = 1.0;
    const auto out = dap_score(scores, binary_assoc(row));
    CHECK(out[0] >= lo - 1e-12);
    CHECK(out[0] <= hi + 1e-12);
  }
}

TEST_CASE("oracle attribute scores give perfect top-1 accuracy") {
  // distinct signed rows; oracle predictor emits the row itself
  const auto assoc = binary_assoc(
      {{1.0, -1.0, 1.0, -1.0}, {-1.0, 1.0, 1.0, -1.0}, {1.0, 1.0, -1.0, -1.0},
       {-1.0, -1.0, -1.0, 1.0}});
  Matrix scores(4, 4);
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t a = 0; a < 4; ++a) scores.at(c, a) = assoc.values[c][a];
  // normalizer fitted on balanced reference scores: mean 0 per attribute
  Matrix ref(2, 4);
  for (std::size_t a = 0; a < 4; ++a) {
    ref.at(0, a) = 1.0;
    ref.at(1, a) = -1.0;
  }
  const ScoreNormalizer norm = fit_normalizer(ref, "reference");
  const auto ranked = rank_classes(scores, norm, assoc, 4);
  for (std::size_t s = 0; s < 4; ++s) {
    REQUIRE(!ranked[s].empty());
    CHECK(ranked[s][0].class_index == s);
  }
}

TEST_CASE("top-k truncation preserves the leading order") {
  const auto assoc = binary_assoc(
      {{1.0, -1.0, -1.0}, {-1.0, 1.0, -1.0}, {-1.0, -1.0, 1.0}});
  Matrix scores = rows({{0.9, 0.5, 0.1}});
  Matrix ref = rows({{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}});
  const ScoreNormalizer norm = fit_normalizer(ref, "reference");
  const auto full = rank_classes(scores, norm, assoc, 3);
  const auto top2 = rank_classes(scores, norm, assoc, 2);
  REQUIRE(full[0].size() == 3);
  REQUIRE(top2[0].size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(top2[0][i].class_index == full[0][i].class_index);
    CHECK(top2[0][i].score == full[0][i].score);
  }
  CHECK(full[0][0].score >= full[0][1].score);
  CHECK(full[0][1].score >= full[0][2].score);
}

TEST_CASE("score ties rank the lower class index first") {
  const auto assoc = binary_assoc({{1.0, -1.0}, {1.0, -1.0}});
  Matrix ref = rows({{-1.0, -1.0}, {1.0, 1.0}});
  const auto ranked =
      rank_classes(rows({{0.3, 0.0}}), fit_normalizer(ref, "reference"), assoc, 2);
  CHECK(ranked[0][0].class_index == 0);
  CHECK(ranked[0][1].class_index == 1);
}

TEST_CASE("batch normalizer with matching statistics matches the reference one") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix scores(30, 2);
  for (auto& v : scores.data) v = gauss(rng);
  const ScoreNormalizer ref = fit_normalizer(scores, "reference");
  const ScoreNormalizer batch = fit_normalizer(scores, "batch");
  CHECK(ref.mean == batch.mean);
  CHECK(ref.std == batch.std);
  const auto assoc = binary_assoc({{1.0, -1.0}, {-1.0, 1.0}});
  const auto a = rank_classes(scores, ref, assoc, 2);
  const auto b = rank_classes(scores, batch, assoc, 2);
  for (std::size_t s = 0; s < scores.rows; ++s)
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(a[s][i].class_index == b[s][i].class_index);
      CHECK(a[s][i].score == b[s][i].score);
    }
}
