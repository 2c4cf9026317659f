#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "topicbridge/runner.hpp"
#include "topicbridge/synth.hpp"
#include "topicbridge/textpipe.hpp"

namespace topicbridge {

/// Resolved pipeline configuration. Precedence when loading:
/// flag > config file > default.
struct RunConfig {
  std::string corpus_path;
  std::string start_month;  // "YYYY-MM"; empty = inferred from corpus
  std::string end_month;
  int k_c = 2;
  int k_d = 3;
  double alpha = 1000.0;
  double beta = 0.1;
  int max_iters = 100;
  double tol = 1e-5;
  std::uint64_t seed = 42;
  int min_df = 2;
  double max_df_ratio = 0.95;
  int per_month_cap = 0;  // 0 = no cap
  std::vector<std::string> methods = {"JointONMF"};
  std::string output_dir = "out";
  int top_terms_count = 5;
  std::string offline_field = "title";  // title | summary | body
  // Suppresses the wall-clock column (writes 0.0) so emitted files are
  // byte-reproducible under a fixed seed; disabled by --measured-timing.
  bool reproducible_timing = true;
};

void apply_config_json(RunConfig& config, const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

/// Throws std::invalid_argument naming the offending field.
void validate_config(const RunConfig& config);

JointParams joint_params_from(const RunConfig& config);

/// Loads a JSON-lines corpus. Each line is one object with fields id,
/// source ("online"|"offline"), timestamp (ISO-8601), and text; offline
/// records may instead carry title/summary/body, read through
/// offline_field. Malformed lines, unknown sources, and duplicate ids
/// are errors naming the line number.
std::vector<Document> load_corpus(const std::string& path,
                                  const std::string& offline_field);

/// Writes metrics.csv, topics.json, and config.json into output_dir.
void emit_outputs(const MethodComparison& comparison, const RunConfig& config,
                  const std::string& output_dir);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

}  // namespace topicbridge
