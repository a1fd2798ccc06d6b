#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "dds/csv.hpp"
#include "dds/dataset.hpp"
#include "dds/metrics.hpp"
#include "dds/oracle.hpp"
#include "dds/predictor.hpp"
#include "dds/rng.hpp"
#include "dds/selector.hpp"
#include "dds/selfcheck.hpp"

using nlohmann::json;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DDS_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    std::cerr << "warning: DDS_SEED is not an integer; using the built-in default\n";
  }
  return dds::kDefaultSeed;
}

struct TrainOptions {
  std::string data;
  std::string label;
  std::size_t bins = 5;
  std::string missing_token;
  std::string lambda = "strict";
  dds::SelectorConfig cfg;
  std::string measure = "pair";
  std::string conflict = "most_accurate";
  std::string default_label = "majority";

  void add_data_flags(CLI::App& app) {
    app.add_option("--data", data, "input CSV file")->required();
    app.add_option("--label", label, "name of the label column")->required();
    app.add_option("--bins", bins, "equal-width bins per numeric feature")
        ->capture_default_str();
    app.add_option("--missing-token", missing_token,
                   "cell value treated as missing (default: empty string)");
  }

  void add_selector_flags(CLI::App& app) {
    app.add_option("--lambda", lambda,
                   "diversity weight: none, perm, strict, or a number")
        ->capture_default_str();
    app.add_option("--m", cfg.m, "sampled rules per class per iteration")
        ->capture_default_str();
    app.add_option("--epsilon", cfg.epsilon, "minimum marginal recall coverage")
        ->capture_default_str();
    app.add_option("--k-max", cfg.k_max, "hard cap on the number of rules");
    app.add_option("--subsample-cap", cfg.subsample_cap,
                   "record cap per partition when building the weight index");
    app.add_option("--seed", cfg.seed, "RNG seed (env DDS_SEED overrides the default)");
    app.add_option("--measure", measure, "sampling measure: pair or triple")
        ->check(CLI::IsMember({"pair", "triple"}))
        ->capture_default_str();
    app.add_option("--conflict", conflict, "conflict resolution strategy")
        ->check(CLI::IsMember({"most_accurate", "highest_quality", "first_match"}))
        ->capture_default_str();
    app.add_option("--default-label", default_label,
                   "default label convention: majority or underrep")
        ->check(CLI::IsMember({"majority", "underrep"}))
        ->capture_default_str();
  }

  dds::SelectorConfig selector_config() const {
    dds::SelectorConfig out = cfg;
    if (lambda == "none") out.lambda_mode = dds::LambdaMode::none;
    else if (lambda == "perm") out.lambda_mode = dds::LambdaMode::perm;
    else if (lambda == "strict") out.lambda_mode = dds::LambdaMode::strict;
    else {
      char* end = nullptr;
      const double v = std::strtod(lambda.c_str(), &end);
      if (end == lambda.c_str() || *end != '\0' || v < 0)
        throw std::invalid_argument(
            "--lambda must be none, perm, strict, or a non-negative number");
      out.lambda_mode = dds::LambdaMode::fixed;
      out.lambda_value = v;
    }
    out.measure = measure == "triple" ? dds::Measure::triple : dds::Measure::pair;
    out.conflict = dds::conflict_strategy_from_string(conflict);
    out.default_label_underrep = default_label == "underrep";
    return out;
  }
};

json report_to_json(const dds::EvalReport& rep) {
  return json{{"n_rules", rep.n_rules}, {"n_conds", rep.n_conds}, {"bacc", rep.bacc},
              {"auc", rep.auc},         {"div", rep.div},         {"overlap", rep.overlap}};
}

std::string report_to_csv(const dds::EvalReport& rep) {
  return std::to_string(rep.n_rules) + "," + dds::format_double(rep.n_conds) + "," +
         dds::format_double(rep.bacc) + "," + dds::format_double(rep.auc) + "," +
         dds::format_double(rep.div) + "," + std::to_string(rep.overlap);
}

void write_trace(const std::string& path, const dds::SelectionTrace& trace,
                 const dds::LabeledDataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  std::size_t iter = 0;
  for (const auto& rec : trace.iterations) {
    json j;
    j["iteration"] = iter++;
    j["items"] = json::array();
    rec.chosen.body.for_each(
        [&](std::size_t item) { j["items"].push_back(d.item_name(item)); });
    j["head"] = d.classes.at(static_cast<std::size_t>(rec.chosen.head));
    j["marginal_quality"] = rec.marginal_quality;
    j["marginal_diversity"] = rec.marginal_diversity;
    j["recall_gain"] = rec.recall_gain;
    j["pool_size"] = rec.pool_size;
    out << j.dump() << "\n";
  }
  json fin;
  fin["lambda"] = trace.lambda;
  fin["objective_first"] = trace.objective_first;
  fin["objective_second"] = trace.objective_second;
  fin["second_run_chosen"] = trace.second_run_chosen;
  out << fin.dump() << "\n";
}

// Binarizes a raw table through the model's specs and maps its labels onto
// the model's classes.
std::pair<std::vector<dds::Bitset>, std::vector<int>> table_for_model(
    const dds::RuleSetModel& model, const dds::RawTable& table, const std::string& label) {
  const std::size_t label_col = table.column_of(label);
  dds::RowBinarizer binarizer(model.specs, table.header, model.missing_token);
  std::vector<dds::Bitset> records;
  std::vector<int> truth;
  for (const auto& row : table.rows) {
    records.push_back(binarizer.binarize(row));
    const std::string& y = row[label_col];
    const auto it = std::find(model.classes.begin(), model.classes.end(), y);
    if (it == model.classes.end())
      throw std::invalid_argument("label '" + y + "' is not among the model's classes");
    truth.push_back(static_cast<int>(it - model.classes.begin()));
  }
  return {std::move(records), std::move(truth)};
}

int cmd_train(const TrainOptions& opts, const std::string& model_path,
              const std::string& trace_path) {
  dds::LabeledDataset d =
      dds::ingest_csv(opts.data, opts.label, opts.bins, opts.missing_token);
  auto [model, trace] = dds::fit(d, opts.selector_config());
  dds::save_model(model, model_path);
  if (!trace_path.empty()) write_trace(trace_path, trace, d);

  double conds = 0.0;
  for (const auto& r : model.rules) conds += static_cast<double>(r.body.count());
  const double n_conds =
      model.rules.empty() ? 0.0 : conds / static_cast<double>(model.rules.size());
  const double f = std::max(trace.objective_first, trace.objective_second);
  std::cout << "n_rules=" << model.rules.size()
            << " n_conds=" << dds::format_double(n_conds)
            << " F=" << dds::format_double(f) << "\n";
  return 0;
}

int cmd_predict(const std::string& data, const std::string& model_path) {
  const dds::RuleSetModel model = dds::load_model(model_path);
  std::ifstream in(data, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + data + "'");
  dds::CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header) || header.empty())
    throw std::runtime_error("'" + data + "': missing header row");

  dds::RowBinarizer binarizer(model.specs, header, model.missing_token);
  std::cout << dds::csv_join(header) << ",prediction\n";
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    row.resize(header.size(), model.missing_token);
    const int y = dds::predict(model, binarizer.binarize(row));
    std::cout << dds::csv_join(row) << ","
              << dds::csv_quote(model.classes.at(static_cast<std::size_t>(y))) << "\n";
  }
  return 0;
}

int cmd_eval(const TrainOptions& opts, const std::string& model_path, double test_fraction,
             std::size_t repeats, bool as_json) {
  if (repeats < 1) throw std::invalid_argument("--repeats must be at least 1");
  const dds::RawTable table = dds::read_csv_table(opts.data, opts.missing_token);
  std::cout << "n_rules,n_conds,bacc,auc,div,overlap\n";

  if (!model_path.empty()) {
    const dds::RuleSetModel model = dds::load_model(model_path);
    auto [records, truth] = table_for_model(model, table, opts.label);
    const dds::EvalReport rep = dds::evaluate_model(model, records, truth);
    std::cout << report_to_csv(rep) << "\n";
    if (as_json) std::cout << report_to_json(rep).dump() << "\n";
    return 0;
  }

  // train/test protocol: split the raw rows, binarize on the training part
  std::vector<dds::EvalReport> reports;
  const dds::SelectorConfig cfg = opts.selector_config();
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    auto [train_rows, test_rows] = dds::stratified_split(
        table, opts.label, test_fraction, dds::derive_seed(cfg.seed, 0x5e17, rep));
    dds::LabeledDataset train =
        dds::ingest_table(train_rows, opts.label, opts.bins, opts.missing_token);
    dds::SelectorConfig run_cfg = cfg;
    run_cfg.seed = dds::derive_seed(cfg.seed, 0xf17, rep);
    auto [model, trace] = dds::fit(train, run_cfg);
    auto [records, truth] = table_for_model(model, test_rows, opts.label);
    reports.push_back(dds::evaluate_model(model, records, truth));
    std::cout << report_to_csv(reports.back()) << "\n";
  }

  // means keep fractional rule and overlap counts, like the per-run rows of
  // a results table would be averaged
  const double n = static_cast<double>(reports.size());
  double m_rules = 0, m_conds = 0, m_bacc = 0, m_auc = 0, m_div = 0, m_overlap = 0;
  for (const auto& r : reports) {
    m_rules += static_cast<double>(r.n_rules) / n;
    m_conds += r.n_conds / n;
    m_bacc += r.bacc / n;
    m_auc += r.auc / n;
    m_div += r.div / n;
    m_overlap += static_cast<double>(r.overlap) / n;
  }
  const std::string mean_csv = dds::format_double(m_rules) + "," +
                               dds::format_double(m_conds) + "," +
                               dds::format_double(m_bacc) + "," +
                               dds::format_double(m_auc) + "," + dds::format_double(m_div) +
                               "," + dds::format_double(m_overlap);
  if (repeats > 1) std::cout << mean_csv << "\n";

  if (as_json) {
    json j;
    j["runs"] = json::array();
    for (const auto& r : reports) j["runs"].push_back(report_to_json(r));
    j["mean"] = json{{"n_rules", m_rules}, {"n_conds", m_conds}, {"bacc", m_bacc},
                     {"auc", m_auc},       {"div", m_div},       {"overlap", m_overlap}};
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_sample(const TrainOptions& opts, const std::string& head, std::size_t m_samples) {
  dds::LabeledDataset d =
      dds::ingest_csv(opts.data, opts.label, opts.bins, opts.missing_token);
  const auto it = std::find(d.classes.begin(), d.classes.end(), head);
  if (it == d.classes.end())
    throw std::invalid_argument("head class '" + head + "' does not occur in the data");
  const int head_id = static_cast<int>(it - d.classes.begin());

  auto [pos, neg] = dds::class_partition(d, head_id);
  dds::SamplerInput inp{pos, neg, {}, m_samples};
  const dds::SelectorConfig cfg = opts.selector_config();
  if (cfg.subsample_cap) {
    inp.pos = dds::subsample_records(inp.pos, *cfg.subsample_cap,
                                     dds::derive_seed(cfg.seed, 0xabcd, 0));
    inp.neg = dds::subsample_records(inp.neg, *cfg.subsample_cap,
                                     dds::derive_seed(cfg.seed, 0xabcd, 1));
  }

  // nothing is covered at this point, so the triple measure reports its
  // empty-partition error and directs the user to the pair variant
  dds::WeightIndex idx = cfg.measure == dds::Measure::triple
                             ? dds::build_weight_index_triples(inp, d)
                             : dds::build_weight_index_pairs(inp, d);

  std::cout << "body,head,measure\n";
  for (const dds::Rule& r : dds::sample_rules(idx, inp, d, head_id, cfg.seed)) {
    std::string body;
    r.body.for_each([&](std::size_t item) {
      if (!body.empty()) body += ";";
      body += d.item_name(item);
    });
    const mpz_class w = dds::oracle::exact_measure(r.body, inp, d, cfg.measure);
    std::cout << dds::csv_quote(body) << "," << dds::csv_quote(head) << ","
              << w.get_str() << "\n";
  }
  return 0;
}

int cmd_selftest(std::uint64_t seed) {
  using dds::selfcheck::Outcome;
  struct Check {
    const char* name;
    Outcome outcome;
  };
  const Check checks[] = {
      {"weight-sum identity", dds::selfcheck::weight_sum_identity_check(40, seed)},
      {"sampling distribution",
       dds::selfcheck::sampler_distribution_check(4, 50000, 0.03, seed)},
      {"greedy 2-approximation", dds::selfcheck::greedy_approximation_check(40, seed)},
      {"jaccard metric axioms", dds::selfcheck::jaccard_metric_check(3000, seed)},
  };
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.outcome.pass ? "[ ok ] " : "[fail] ") << c.name << ": "
              << c.outcome.detail << "\n";
    all = all && c.outcome.pass;
  }
  std::cout << (all ? "selftest passed" : "selftest FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dds - diverse rule set learning"};
  app.require_subcommand(1);

  TrainOptions train_opts, eval_opts, sample_opts;
  train_opts.cfg.seed = default_seed();
  eval_opts.cfg.seed = default_seed();
  sample_opts.cfg.seed = default_seed();

  auto* train = app.add_subcommand("train", "learn a rule set and write the model JSON");
  train_opts.add_data_flags(*train);
  train_opts.add_selector_flags(*train);
  std::string model_out, trace_path;
  train->add_option("--model", model_out, "output path for the model JSON")->required();
  train->add_option("--trace", trace_path, "write per-iteration trace JSON lines here");

  auto* predict = app.add_subcommand("predict", "append a prediction column to a CSV");
  std::string predict_data, predict_model;
  predict->add_option("--data", predict_data, "input CSV file")->required();
  predict->add_option("--model", predict_model, "trained model JSON")->required();

  auto* eval = app.add_subcommand(
      "eval", "evaluate a model, or train/test over seeded splits, as CSV rows");
  eval_opts.add_data_flags(*eval);
  eval_opts.add_selector_flags(*eval);
  std::string eval_model;
  double test_fraction = 0.3;
  std::size_t repeats = 1;
  bool as_json = false;
  eval->add_option("--model", eval_model,
                   "evaluate this model on the data instead of training");
  eval->add_option("--test-fraction", test_fraction, "held-out fraction per repeat")
      ->capture_default_str();
  eval->add_option("--repeats", repeats, "number of seeded train/test repeats")
      ->capture_default_str();
  eval->add_flag("--json", as_json, "also print the report(s) as JSON");

  auto* sample = app.add_subcommand("sample", "dump sampled candidate rules as CSV");
  sample_opts.add_data_flags(*sample);
  sample_opts.add_selector_flags(*sample);
  std::string head;
  std::size_t m_samples = 100;
  sample->add_option("--head", head, "class to sample rules for")->required();
  sample->add_option("--n", m_samples, "number of rules to draw")->capture_default_str();

  auto* selftest = app.add_subcommand("selftest", "run the built-in oracle-backed checks");
  std::uint64_t selftest_seed = default_seed();
  selftest->add_option("--seed", selftest_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*train) return cmd_train(train_opts, model_out, trace_path);
    if (*predict) return cmd_predict(predict_data, predict_model);
    if (*eval) return cmd_eval(eval_opts, eval_model, test_fraction, repeats, as_json);
    if (*sample) return cmd_sample(sample_opts, head, m_samples);
    if (*selftest) return cmd_selftest(selftest_seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
