#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "topicbridge/corpus_io.hpp"
#include "topicbridge/log.hpp"
#include "topicbridge/synth.hpp"

namespace tb = topicbridge;

namespace {

// English function words frequent enough to pollute topic rows.
const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a",    "about", "after", "all",  "also", "an",   "and",  "any",
      "are",  "as",    "at",    "be",   "been", "but",  "by",   "can",
      "could", "did",  "do",    "does", "for",  "from", "had",  "has",
      "have", "he",    "her",   "his",  "how",  "if",   "in",   "into",
      "is",   "it",    "its",   "just", "like", "me",   "more", "most",
      "my",   "no",    "not",   "now",  "of",   "on",   "one",  "only",
      "or",   "our",   "out",   "over", "she",  "so",   "some", "than",
      "that", "the",   "their", "them", "then", "there", "they", "this",
      "to",   "up",    "us",    "was",  "we",   "were", "what", "when",
      "which", "who",  "why",   "will", "with", "would", "you", "your"};
  return words;
}

void add_config_flags(CLI::App& cmd, tb::RunConfig& config) {
  cmd.add_option("--corpus", config.corpus_path, "JSON-lines corpus file");
  cmd.add_option("--start-month", config.start_month,
                 "First month, YYYY-MM (default: inferred)");
  cmd.add_option("--end-month", config.end_month,
                 "Last month, YYYY-MM (default: inferred)");
  cmd.add_option("--k-c", config.k_c, "Common topic count");
  cmd.add_option("--k-d", config.k_d, "Distinct topic count");
  cmd.add_option("--alpha", config.alpha, "Commonness weight");
  cmd.add_option("--beta", config.beta, "Distinctiveness weight");
  cmd.add_option("--max-iters", config.max_iters,
                 "Inner iterations per time step");
  cmd.add_option("--tol", config.tol, "Relative convergence threshold");
  cmd.add_option("--seed", config.seed, "RNG seed");
  cmd.add_option("--min-df", config.min_df, "Minimum document frequency");
  cmd.add_option("--max-df-ratio", config.max_df_ratio,
                 "Maximum document-frequency ratio");
  cmd.add_option("--per-month-cap", config.per_month_cap,
                 "Random per-source monthly document cap (0 = none)");
  cmd.add_option("--method", config.methods,
                 "Method(s): JointONMF, ONMF, SNMF");
  cmd.add_option("--output-dir", config.output_dir, "Output directory");
  cmd.add_option("--top-terms", config.top_terms_count,
                 "Terms reported per topic");
  cmd.add_option("--offline-field", config.offline_field,
                 "Offline text field: title, summary, or body");
  cmd.add_flag_callback(
      "--measured-timing",
      [&config] { config.reproducible_timing = false; },
      "Write measured wall-clock times (output no longer byte-reproducible)");
}

int run_pipeline(const tb::RunConfig& config) {
  tb::validate_config(config);
  if (config.corpus_path.empty())
    throw std::invalid_argument("config: corpus_path is required");

  std::vector<tb::Document> corpus =
      tb::load_corpus(config.corpus_path, config.offline_field);
  if (corpus.empty()) throw std::runtime_error("corpus is empty");

  tb::Date start{9999, 12, 1}, end{0, 1, 1};
  if (!config.start_month.empty())
    start = tb::parse_date(config.start_month + "-01");
  if (!config.end_month.empty())
    end = tb::parse_date(config.end_month + "-01");
  std::vector<tb::Document> online, offline;
  for (tb::Document& doc : corpus) {
    if (config.start_month.empty() &&
        doc.timestamp.month_key() < start.month_key())
      start = {doc.timestamp.year, doc.timestamp.month, 1};
    if (config.end_month.empty() &&
        doc.timestamp.month_key() > end.month_key())
      end = {doc.timestamp.year, doc.timestamp.month, 1};
  }
  for (tb::Document& doc : corpus) {
    if (doc.timestamp.month_key() < start.month_key() ||
        doc.timestamp.month_key() > end.month_key())
      continue;  // outside the requested window
    (doc.source == tb::Source::online ? online : offline)
        .push_back(std::move(doc));
  }

  std::vector<tb::Document> windowed = online;
  windowed.insert(windowed.end(), offline.begin(), offline.end());
  tb::Vocabulary vocab = tb::build_vocabulary(
      windowed, config.min_df, config.max_df_ratio, default_stopwords());
  tb::log::info("vocabulary: " + std::to_string(vocab.size()) + " terms");

  tb::StreamSchedule schedule = tb::interleave_schedule(
      online, offline, start, end, config.per_month_cap, config.seed);

  std::vector<tb::MethodKind> methods;
  for (const std::string& name : config.methods)
    methods.push_back(tb::parse_method(name));

  tb::MethodComparison comparison =
      tb::compare_methods(schedule, methods, tb::joint_params_from(config),
                          vocab, config.top_terms_count);
  tb::emit_outputs(comparison, config, config.output_dir);

  std::cout << "method,mean_cscore,mean_dscore,mean_re,mean_wall_clock_s\n";
  for (const tb::MethodAggregate& agg : comparison.aggregates)
    std::cout << tb::to_string(agg.method) << ','
              << tb::format_double(agg.mean_cscore) << ','
              << tb::format_double(agg.mean_dscore) << ','
              << tb::format_double(agg.mean_re) << ','
              << tb::format_double(agg.mean_wall_clock_s) << '\n';
  std::cout << "outputs written to " << config.output_dir << "\n";
  return 0;
}

int run_synth(const tb::SynthConfig& cfg, const std::string& out_path) {
  tb::SynthCorpus corpus = tb::generate_synth_corpus(cfg);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);

  char date[16];
  for (const tb::Document& doc : corpus.online) {
    std::snprintf(date, sizeof date, "%04d-%02d-%02d", doc.timestamp.year,
                  doc.timestamp.month, doc.timestamp.day);
    out << nlohmann::json{{"id", doc.id},
                          {"source", "online"},
                          {"timestamp", date},
                          {"text", doc.text}}
               .dump()
        << '\n';
  }
  for (const tb::SynthOfflineRecord& rec : corpus.offline) {
    std::snprintf(date, sizeof date, "%04d-%02d-%02d", rec.timestamp.year,
                  rec.timestamp.month, rec.timestamp.day);
    out << nlohmann::json{{"id", rec.id},
                          {"source", "offline"},
                          {"timestamp", date},
                          {"title", rec.title},
                          {"summary", rec.summary},
                          {"body", rec.body}}
               .dump()
        << '\n';
  }
  std::cout << "wrote " << corpus.online.size() + corpus.offline.size()
            << " documents to " << out_path << "\n";
  return 0;
}

// Pre-scan for --config so file values become defaults that flags override.
std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc - 1; ++i)
    if (std::string_view(argv[i]) == "--config") return argv[i + 1];
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming common/distinct topic tracking over two "
               "interleaved document sources"};
  app.require_subcommand(1);

  tb::RunConfig config;
  const std::string config_path = find_config_arg(argc, argv);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config file: " << config_path << "\n";
      return 1;
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
      std::cerr << "malformed config file: " << config_path << "\n";
      return 1;
    }
    try {
      tb::apply_config_json(config, j);
    } catch (const std::exception& e) {
      std::cerr << "bad config file: " << e.what() << "\n";
      return 1;
    }
  }

  std::string config_dummy;
  CLI::App* run = app.add_subcommand("run", "Run the full pipeline");
  run->add_option("--config", config_dummy, "JSON config file");
  add_config_flags(*run, config);

  CLI::App* compare =
      app.add_subcommand("compare", "Run and compare several methods");
  compare->add_option("--config", config_dummy, "JSON config file");
  add_config_flags(*compare, config);

  tb::SynthConfig synth_cfg;
  std::string synth_out = "synth_corpus.jsonl";
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a seeded planted-topic corpus");
  synth->add_option("--months", synth_cfg.months, "Number of months");
  synth->add_option("--seed", synth_cfg.seed, "RNG seed");
  synth->add_option("--docs-per-month", synth_cfg.docs_per_source_per_month,
                    "Documents per source per month");
  synth->add_option("--vocab", synth_cfg.vocab_size, "Vocabulary size");
  synth->add_option("--shared-topics", synth_cfg.k_shared,
                    "Planted shared topic count");
  synth->add_option("--distinct-topics", synth_cfg.k_distinct,
                    "Planted drifting topic count per source");
  synth->add_option("--out", synth_out, "Output corpus path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return run_synth(synth_cfg, synth_out);
    if (compare->parsed() && config.methods == std::vector<std::string>{
                                 "JointONMF"} &&
        compare->count("--method") == 0)
      config.methods = {"JointONMF", "ONMF", "SNMF"};
    return run_pipeline(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
