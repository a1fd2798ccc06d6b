#include "dds/predictor.hpp"

#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace dds {

using nlohmann::json;

std::string to_string(ConflictStrategy s) {
  switch (s) {
    case ConflictStrategy::most_accurate: return "most_accurate";
    case ConflictStrategy::highest_quality: return "highest_quality";
    case ConflictStrategy::first_match: return "first_match";
  }
  throw std::logic_error("unknown conflict strategy");
}

ConflictStrategy conflict_strategy_from_string(const std::string& s) {
  if (s == "most_accurate") return ConflictStrategy::most_accurate;
  if (s == "highest_quality") return ConflictStrategy::highest_quality;
  if (s == "first_match") return ConflictStrategy::first_match;
  throw std::invalid_argument("unknown conflict strategy '" + s + "'");
}

std::size_t RuleSetModel::n_items() const {
  std::size_t n = 0;
  for (const auto& spec : specs) n += spec.n_items();
  return n;
}

std::vector<std::string> RuleSetModel::feature_names() const {
  std::vector<std::string> names;
  for (const auto& spec : specs) names.push_back(spec.name);
  return names;
}

namespace {

void check_universe(const RuleSetModel& model, const Bitset& x) {
  if (x.size() != model.n_items())
    throw std::invalid_argument("record universe does not match the model");
}

// Index of the winning rule among those covering x, or -1.
int covering_winner(const RuleSetModel& model, const Bitset& x) {
  int best = -1;
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    const auto& r = model.rules[i];
    if (!r.body.is_subset_of(x)) continue;
    if (best < 0) {
      best = static_cast<int>(i);
      if (model.conflict == ConflictStrategy::first_match) return best;
      continue;
    }
    const auto& b = model.rules[static_cast<std::size_t>(best)];
    if (model.conflict == ConflictStrategy::most_accurate) {
      if (r.precision > b.precision ||
          (r.precision == b.precision && r.quality > b.quality))
        best = static_cast<int>(i);
    } else {  // highest_quality
      if (r.quality > b.quality ||
          (r.quality == b.quality && r.precision > b.precision))
        best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

int predict(const RuleSetModel& model, const Bitset& x) {
  check_universe(model, x);
  const int w = covering_winner(model, x);
  return w < 0 ? model.default_label : model.rules[static_cast<std::size_t>(w)].head;
}

std::vector<double> predict_scores(const RuleSetModel& model, const Bitset& x) {
  check_universe(model, x);
  std::vector<double> scores(model.classes.size(), 0.0);
  bool covered = false;
  for (const auto& r : model.rules) {
    if (!r.body.is_subset_of(x)) continue;
    covered = true;
    auto& s = scores[static_cast<std::size_t>(r.head)];
    s = std::max(s, r.precision);
  }
  double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
  if (!covered || sum <= 0.0) return model.class_priors;
  for (auto& s : scores) s /= sum;
  return scores;
}

namespace {

json spec_to_json(const FeatureSpec& spec) {
  json j;
  j["name"] = spec.name;
  if (spec.kind == FeatureKind::numeric) {
    j["kind"] = "numeric";
    j["bin_edges"] = spec.bin_edges;
    j["lo"] = spec.lo;
    j["hi"] = spec.hi;
    j["has_missing"] = spec.has_missing;
  } else {
    j["kind"] = "categorical";
    j["categories"] = spec.categories;
  }
  return j;
}

FeatureSpec spec_from_json(const json& j) {
  FeatureSpec spec;
  spec.name = j.at("name").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "numeric") {
    spec.kind = FeatureKind::numeric;
    spec.bin_edges = j.at("bin_edges").get<std::vector<double>>();
    spec.lo = j.at("lo").get<double>();
    spec.hi = j.at("hi").get<double>();
    spec.has_missing = j.at("has_missing").get<bool>();
  } else if (kind == "categorical") {
    spec.kind = FeatureKind::categorical;
    spec.categories = j.at("categories").get<std::vector<std::string>>();
  } else {
    throw std::invalid_argument("unknown feature kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

std::string model_to_json(const RuleSetModel& model) {
  json j;
  j["format"] = 1;
  j["classes"] = model.classes;
  j["default_label"] = model.default_label;
  j["conflict_strategy"] = to_string(model.conflict);
  j["missing_token"] = model.missing_token;
  j["class_priors"] = model.class_priors;
  j["specs"] = json::array();
  for (const auto& spec : model.specs) j["specs"].push_back(spec_to_json(spec));

  // item names straight from the specs, so rules serialize by name
  std::vector<std::string> item_names;
  for (const auto& spec : model.specs)
    for (std::size_t local = 0; local < spec.n_items(); ++local)
      item_names.push_back(spec.item_name(local, model.missing_token));

  j["rules"] = json::array();
  for (const auto& r : model.rules) {
    json rj;
    rj["items"] = json::array();
    r.body.for_each([&](std::size_t item) { rj["items"].push_back(item_names.at(item)); });
    rj["head"] = model.classes.at(static_cast<std::size_t>(r.head));
    rj["precision"] = r.precision;
    rj["quality"] = r.quality;
    j["rules"].push_back(rj);
  }
  return j.dump(2) + "\n";
}

RuleSetModel model_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("format").get<int>() != 1)
    throw std::invalid_argument("unsupported model format");

  RuleSetModel model;
  model.classes = j.at("classes").get<std::vector<std::string>>();
  model.default_label = j.at("default_label").get<int>();
  model.conflict = conflict_strategy_from_string(j.at("conflict_strategy").get<std::string>());
  model.missing_token = j.at("missing_token").get<std::string>();
  model.class_priors = j.at("class_priors").get<std::vector<double>>();
  for (const auto& sj : j.at("specs")) model.specs.push_back(spec_from_json(sj));

  std::unordered_map<std::string, std::size_t> item_id;
  std::unordered_map<std::string, int> class_id;
  {
    std::size_t next = 0;
    for (const auto& spec : model.specs)
      for (std::size_t local = 0; local < spec.n_items(); ++local)
        item_id.emplace(spec.item_name(local, model.missing_token), next++);
    for (std::size_t y = 0; y < model.classes.size(); ++y)
      class_id.emplace(model.classes[y], static_cast<int>(y));
  }

  const std::size_t n_items = model.n_items();
  for (const auto& rj : j.at("rules")) {
    ScoredRule r;
    r.body = Bitset(n_items);
    for (const auto& name : rj.at("items")) {
      auto it = item_id.find(name.get<std::string>());
      if (it == item_id.end())
        throw std::invalid_argument("rule item '" + name.get<std::string>() +
                                    "' not present in the model's specs");
      r.body.set(it->second);
    }
    auto cit = class_id.find(rj.at("head").get<std::string>());
    if (cit == class_id.end())
      throw std::invalid_argument("rule head class not present in the model");
    r.head = cit->second;
    r.precision = rj.at("precision").get<double>();
    r.quality = rj.at("quality").get<double>();
    model.rules.push_back(std::move(r));
  }
  return model;
}

void save_model(const RuleSetModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << model_to_json(model);
}

RuleSetModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace dds
