#include <doctest.h>

#include <cstdio>

#include "dds/predictor.hpp"
#include "dds/selector.hpp"
#include "fixtures.hpp"

using namespace dds;
using dds::testing::body_of;

namespace {

// Two-class model over three items: {0} -> p with precision 0.9,
// {1} -> n with precision 0.6.
RuleSetModel toy_model() {
  RuleSetModel m;
  m.classes = {"p", "n"};
  m.default_label = 1;
  m.class_priors = {0.5, 0.5};
  m.missing_token = "";
  for (int j = 0; j < 3; ++j) {
    FeatureSpec spec;
    spec.name = "f" + std::to_string(j);
    spec.kind = FeatureKind::categorical;
    spec.categories = {"1"};
    m.specs.push_back(spec);
  }
  m.rules.push_back({body_of(3, {0}), 0, 0.9, 0.5});
  m.rules.push_back({body_of(3, {1}), 1, 0.6, 0.8});
  return m;
}

}  // namespace

TEST_CASE("conflict resolution strategies") {
  RuleSetModel m = toy_model();
  const Bitset both = body_of(3, {0, 1});

  m.conflict = ConflictStrategy::most_accurate;
  CHECK(predict(m, both) == 0);  // precision 0.9 beats 0.6
  m.conflict = ConflictStrategy::highest_quality;
  CHECK(predict(m, both) == 1);  // quality 0.8 beats 0.5
  m.conflict = ConflictStrategy::first_match;
  CHECK(predict(m, both) == 0);

  // no covering rule: the default label, whatever the strategy
  CHECK(predict(m, body_of(3, {2})) == 1);
  // exactly one covering rule: its head regardless of strategy
  for (auto s : {ConflictStrategy::most_accurate, ConflictStrategy::highest_quality,
                 ConflictStrategy::first_match}) {
    m.conflict = s;
    CHECK(predict(m, body_of(3, {0, 2})) == 0);
  }

  CHECK_THROWS_AS(predict(m, Bitset(5)), std::invalid_argument);
}

TEST_CASE("score vectors") {
  RuleSetModel m = toy_model();
  // nothing covers: the training priors
  CHECK(predict_scores(m, body_of(3, {2})) == std::vector<double>{0.5, 0.5});
  // single covering rule: its class takes all normalized mass
  CHECK(predict_scores(m, body_of(3, {0})) == std::vector<double>{1.0, 0.0});
  // both cover: normalized (0.9, 0.6)
  auto s = predict_scores(m, body_of(3, {0, 1}));
  CHECK(s[0] == doctest::Approx(0.6));
  CHECK(s[1] == doctest::Approx(0.4));

  // two covering rules with the same head use the max precision
  RuleSetModel two = toy_model();
  two.rules.push_back({body_of(3, {2}), 0, 0.7, 0.1});
  two.rules.push_back({body_of(3, {1, 2}), 0, 0.95, 0.1});
  auto s2 = predict_scores(two, body_of(3, {1, 2}));
  // covering: {1}->n 0.6, {2}->p 0.7, {1,2}->p 0.95
  CHECK(s2[0] == doctest::Approx(0.95 / 1.55));
  CHECK(s2[1] == doctest::Approx(0.6 / 1.55));
}

TEST_CASE("argmax of scores agrees with most-accurate prediction") {
  RuleSetModel m = toy_model();
  m.conflict = ConflictStrategy::most_accurate;
  for (const Bitset& x : {body_of(3, {0}), body_of(3, {1}), body_of(3, {0, 1}),
                          body_of(3, {0, 1, 2})}) {
    auto s = predict_scores(m, x);
    const int argmax = static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
    CHECK(argmax == predict(m, x));
  }
}

TEST_CASE("model json round trip is bit exact") {
  LabeledDataset d = ingest_csv(std::string(DDS_TEST_DATA_DIR) + "/iris.csv", "class", 5, "");
  SelectorConfig cfg;
  cfg.lambda_mode = LambdaMode::strict;
  cfg.m = 60;
  cfg.seed = 9;
  auto [model, trace] = fit(d, cfg);
  REQUIRE(model.rules.size() >= 1);

  const std::string text = model_to_json(model);
  RuleSetModel loaded = model_from_json(text);
  CHECK(model_to_json(loaded) == text);

  // loaded model predicts identically
  for (const auto& rec : d.records) {
    CHECK(predict(loaded, rec) == predict(model, rec));
    CHECK(predict_scores(loaded, rec) == predict_scores(model, rec));
  }

  const std::string path = std::string(DDS_TEST_TMP_DIR) + "/model_roundtrip.json";
  save_model(model, path);
  RuleSetModel from_file = load_model(path);
  CHECK(model_to_json(from_file) == text);
  std::remove(path.c_str());

  // evaluating the reloaded model reproduces the in-memory evaluation exactly
  std::vector<int> truth = d.labels;
  const EvalReport in_memory = evaluate_model(model, d.records, truth);
  const EvalReport reloaded = evaluate_model(from_file, d.records, truth);
  CHECK(in_memory.bacc == reloaded.bacc);
  CHECK(in_memory.auc == reloaded.auc);
  CHECK(in_memory.div == reloaded.div);
  CHECK(in_memory.overlap == reloaded.overlap);
  CHECK(in_memory.n_rules == reloaded.n_rules);
}

TEST_CASE("malformed models are rejected") {
  CHECK_THROWS(model_from_json("{}"));
  CHECK_THROWS(model_from_json("{\"format\": 2}"));
  RuleSetModel m = toy_model();
  std::string text = model_to_json(m);
  // a rule item name that no spec produces
  auto pos = text.find("f0=1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "zz=9");
  CHECK_THROWS_AS(model_from_json(text), std::invalid_argument);
}
