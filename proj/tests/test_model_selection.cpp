#include <doctest.h>

#include <cmath>

#include "specem/model_selection.hpp"
#include "specem/report_json.hpp"
#include "specem/simulation.hpp"

using namespace specem;

TEST_CASE("classification_entropy: binary matrices score exactly zero") {
  std::vector<std::vector<double>> gamma = {{1, 0}, {0, 1}, {1, 0}};
  CHECK(classification_entropy(gamma) == 0.0);
}

TEST_CASE("classification_entropy: a single even row scores log 2") {
  CHECK(classification_entropy({{0.5, 0.5}}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("classification_entropy: uniform rows add up to N log K") {
  const std::size_t n = 7, k = 4;
  std::vector<std::vector<double>> gamma(n, std::vector<double>(k, 1.0 / k));
  CHECK(classification_entropy(gamma) ==
        doctest::Approx(n * std::log(static_cast<double>(k))).epsilon(1e-9));
}

TEST_CASE("nec: quotient, perfect separation, undefined denominator") {
  CHECK(nec(0.0, -10.0, -20.0) == 0.0);
  CHECK(nec(std::log(2.0), -10.0, -20.0) == doctest::Approx(0.0693147180559945).epsilon(1e-9));
  CHECK_THROWS_AS(nec(1.0, -20.0, -20.0), UndefinedNEC);
  CHECK_THROWS_AS(nec(1.0, -25.0, -20.0), UndefinedNEC);
}

TEST_CASE("elbow: largest drop in incremental gain, ties to the smaller K") {
  CHECK(elbow({0, 100, 101, 102}) == 2);
  CHECK(elbow({0, 50, 100, 101, 102}) == 3);
  CHECK(elbow({0, 10, 20, 30}) == 2);  // strictly linear: tie-break
  CHECK_THROWS_AS(elbow({0, 1}), TooFewPoints);
}

TEST_CASE("select_k: covers exactly K = 1..k_max") {
  const LabeledSet data = generate(five_class_benchmark(6, 50, 1));
  EmConfig cfg;
  cfg.seed = 1;
  const SelectionReport rep = select_k(data.set, 2, cfg);
  REQUIRE(rep.records.size() == 2);
  CHECK(rep.records[0].k == 1);
  CHECK(rep.records[1].k == 2);
  CHECK(rep.records[0].loglik.has_value());
  CHECK_FALSE(rep.records[0].nec.has_value());
}

TEST_CASE("select_k: homogeneous data falls back to the elbow recommendation") {
  SimSpec spec;
  spec.classes = {{SimClassType::white_noise, 0, 0, -1, "wn"}};
  spec.n_per_class = 40;
  spec.length = 32;
  spec.seed = 4;
  const LabeledSet data = generate(spec);
  EmConfig cfg;
  cfg.seed = 4;
  const SelectionReport rep = select_k(data.set, 5, cfg);
  REQUIRE(rep.elbow_k.has_value());
  REQUIRE(rep.recommended_k.has_value());
  if (rep.nec_local_minima.empty()) {
    CHECK(*rep.recommended_k == *rep.elbow_k);
  } else {
    CHECK(*rep.recommended_k >= *rep.elbow_k);
  }
}

TEST_CASE("select_k: five-class benchmark recommends a K at or above the elbow") {
  const LabeledSet data = generate(five_class_benchmark(40, 50, 0));
  EmConfig cfg;
  cfg.seed = 0;
  const SelectionReport rep = select_k(data.set, 6, cfg);
  REQUIRE(rep.elbow_k.has_value());
  REQUIRE(rep.nec_global_min.has_value());
  CHECK(*rep.nec_global_min >= 2);
  // likelihood is non-decreasing in K (within restart noise)
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    REQUIRE(rep.records[i].loglik.has_value());
    CHECK(*rep.records[i].loglik >= *rep.records[i - 1].loglik - 1e-6);
  }
  // entropy of every solution is non-negative
  for (const auto& r : rep.records) {
    REQUIRE(r.entropy.has_value());
    CHECK(*r.entropy >= 0.0);
  }
}

TEST_CASE("SelectionReport: JSON serialization round-trips losslessly") {
  const LabeledSet data = generate(five_class_benchmark(8, 50, 2));
  EmConfig cfg;
  cfg.seed = 2;
  const SelectionReport rep = select_k(data.set, 4, cfg);

  RunManifest manifest;
  manifest.command = "select-k";
  manifest.timestamp = "pinned";
  const json j = selection_report_to_json(rep, manifest);
  const SelectionReport back = selection_report_from_json(j);

  REQUIRE(back.records.size() == rep.records.size());
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    CHECK(back.records[i].k == rep.records[i].k);
    CHECK(back.records[i].loglik == rep.records[i].loglik);
    CHECK(back.records[i].entropy == rep.records[i].entropy);
    CHECK(back.records[i].nec == rep.records[i].nec);
    CHECK(back.records[i].error == rep.records[i].error);
  }
  CHECK(back.nec_global_min == rep.nec_global_min);
  CHECK(back.nec_local_minima == rep.nec_local_minima);
  CHECK(back.elbow_k == rep.elbow_k);
  CHECK(back.recommended_k == rep.recommended_k);
}
