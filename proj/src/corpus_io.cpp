#include "topicbridge/corpus_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace topicbridge {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void apply_config_json(RunConfig& c, const nlohmann::json& j) {
  read_field(j, "corpus_path", c.corpus_path);
  read_field(j, "start_month", c.start_month);
  read_field(j, "end_month", c.end_month);
  read_field(j, "k_c", c.k_c);
  read_field(j, "k_d", c.k_d);
  read_field(j, "alpha", c.alpha);
  read_field(j, "beta", c.beta);
  read_field(j, "max_iters", c.max_iters);
  read_field(j, "tol", c.tol);
  read_field(j, "seed", c.seed);
  read_field(j, "min_df", c.min_df);
  read_field(j, "max_df_ratio", c.max_df_ratio);
  read_field(j, "per_month_cap", c.per_month_cap);
  read_field(j, "methods", c.methods);
  read_field(j, "output_dir", c.output_dir);
  read_field(j, "top_terms_count", c.top_terms_count);
  read_field(j, "offline_field", c.offline_field);
  read_field(j, "reproducible_timing", c.reproducible_timing);
}

nlohmann::json config_to_json(const RunConfig& c) {
  return nlohmann::json{{"corpus_path", c.corpus_path},
                        {"start_month", c.start_month},
                        {"end_month", c.end_month},
                        {"k_c", c.k_c},
                        {"k_d", c.k_d},
                        {"alpha", c.alpha},
                        {"beta", c.beta},
                        {"max_iters", c.max_iters},
                        {"tol", c.tol},
                        {"seed", c.seed},
                        {"min_df", c.min_df},
                        {"max_df_ratio", c.max_df_ratio},
                        {"per_month_cap", c.per_month_cap},
                        {"methods", c.methods},
                        {"output_dir", c.output_dir},
                        {"top_terms_count", c.top_terms_count},
                        {"offline_field", c.offline_field},
                        {"reproducible_timing", c.reproducible_timing}};
}

void validate_config(const RunConfig& c) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
  };
  if (c.k_c < 1) fail("k_c must be >= 1");
  if (c.k_d < 1) fail("k_d must be >= 1");
  if (c.alpha < 0) fail("alpha must be >= 0");
  if (c.beta < 0) fail("beta must be >= 0");
  if (c.max_iters < 1) fail("max_iters must be >= 1");
  if (c.tol < 0) fail("tol must be >= 0");
  if (c.min_df < 1) fail("min_df must be >= 1");
  if (c.max_df_ratio <= 0 || c.max_df_ratio > 1)
    fail("max_df_ratio must be in (0, 1]");
  if (c.per_month_cap < 0) fail("per_month_cap must be >= 0");
  if (c.top_terms_count < 1) fail("top_terms_count must be >= 1");
  if (c.methods.empty()) fail("methods must not be empty");
  for (const std::string& m : c.methods) parse_method(m);
  if (c.offline_field != "title" && c.offline_field != "summary" &&
      c.offline_field != "body")
    fail("offline_field must be title, summary, or body");
  if (!c.start_month.empty() && !c.end_month.empty() &&
      parse_date(c.start_month + "-01").month_key() >
          parse_date(c.end_month + "-01").month_key())
    fail("start_month after end_month");
}

JointParams joint_params_from(const RunConfig& c) {
  JointParams params;
  params.k_c = c.k_c;
  params.k_d = c.k_d;
  params.alpha = c.alpha;
  params.beta = c.beta;
  params.solver.max_iters = c.max_iters;
  params.solver.tol = c.tol;
  params.solver.seed = c.seed;
  return params;
}

std::vector<Document> load_corpus(const std::string& path,
                                  const std::string& offline_field) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);

  std::vector<Document> docs;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               msg);
    };
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) fail("malformed JSON");
    if (!j.contains("id") || !j.at("id").is_string()) fail("missing id");
    if (!j.contains("source")) fail("missing source");
    if (!j.contains("timestamp")) fail("missing timestamp");

    Document doc;
    doc.id = j.at("id").get<std::string>();
    if (doc.id.empty()) fail("empty id");
    if (!seen_ids.insert(doc.id).second) fail("duplicate id: " + doc.id);

    const std::string source = j.at("source").get<std::string>();
    if (source == "online") doc.source = Source::online;
    else if (source == "offline") doc.source = Source::offline;
    else fail("unknown source: " + source);

    try {
      doc.timestamp = parse_date(j.at("timestamp").get<std::string>());
    } catch (const std::exception& e) {
      fail(e.what());
    }

    if (doc.source == Source::offline && j.contains(offline_field))
      doc.text = j.at(offline_field).get<std::string>();
    else if (j.contains("text"))
      doc.text = j.at("text").get<std::string>();
    else
      fail(doc.source == Source::offline
               ? "missing " + offline_field + " and text"
               : "missing text");
    docs.push_back(std::move(doc));
  }
  return docs;
}

namespace {

nlohmann::json topics_json(const std::vector<TopicEntry>& entries) {
  nlohmann::json out = nlohmann::json::array();
  for (const TopicEntry& entry : entries) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [term, weight] : entry.terms)
      terms.push_back({{"term", term}, {"weight", weight}});
    out.push_back({{"terms", terms}});
  }
  return out;
}

}  // namespace

void emit_outputs(const MethodComparison& comparison, const RunConfig& config,
                  const std::string& output_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);

  auto open = [&](const char* name) {
    std::ofstream out(fs::path(output_dir) / name, std::ios::binary);
    if (!out)
      throw std::runtime_error(std::string("cannot write ") + output_dir +
                               "/" + name);
    return out;
  };

  {
    std::ofstream csv = open("metrics.csv");
    csv << "time_index,method,cscore,dscore,re,wall_clock_s\n";
    for (const TimeSeriesResult& result : comparison.results) {
      for (const MetricRecord& rec : result.records) {
        const double wall =
            config.reproducible_timing ? 0.0 : rec.wall_clock_s;
        csv << rec.time_index << ',' << to_string(rec.method) << ','
            << format_double(rec.cscore) << ',' << format_double(rec.dscore)
            << ',' << format_double(rec.re) << ',' << format_double(wall)
            << '\n';
      }
    }
  }
  {
    nlohmann::json methods = nlohmann::json::array();
    for (const TimeSeriesResult& result : comparison.results) {
      nlohmann::json steps = nlohmann::json::array();
      for (const TopicReport& report : result.reports)
        steps.push_back({{"time_index", report.time_index},
                         {"common", topics_json(report.common)},
                         {"distinct_prior", topics_json(report.distinct_prior)},
                         {"distinct_new", topics_json(report.distinct_new)}});
      methods.push_back(
          {{"method", to_string(result.method)}, {"steps", steps}});
    }
    open("topics.json") << nlohmann::json{{"methods", methods}}.dump(2)
                        << '\n';
  }
  open("config.json") << config_to_json(config).dump(2) << '\n';
}

}  // namespace topicbridge
