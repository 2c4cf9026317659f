#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "topicbridge/joint.hpp"
#include "topicbridge/metrics.hpp"
#include "topicbridge/textpipe.hpp"

namespace topicbridge {

enum class MethodKind { JointONMF, ONMF, SNMF };

std::string to_string(MethodKind method);
MethodKind parse_method(std::string_view name);  // throws on unknown names

struct MetricRecord {
  int time_index = 0;
  MethodKind method = MethodKind::JointONMF;
  double cscore = 0.0;
  double dscore = 0.0;
  double re = 0.0;
  double wall_clock_s = 0.0;
  long input_rows = 0;  // rows handed to the solver this step
  std::string warning;  // non-empty when the step degraded
};

struct TopicEntry {
  std::vector<std::pair<std::string, double>> terms;
};

struct TopicReport {
  int time_index = 0;
  std::vector<TopicEntry> common;
  std::vector<TopicEntry> distinct_prior;  // before-t side
  std::vector<TopicEntry> distinct_new;    // new-data side
};

struct TimeSeriesResult {
  MethodKind method = MethodKind::JointONMF;
  JointParams params;
  std::vector<MetricRecord> records;
  std::vector<TopicReport> reports;
  // Recovered common-topic rows per record (H_Uc for JointONMF, the
  // matched new-side rows for the baselines), in vocabulary space.
  std::vector<Matrix> common_topics;
};

/// Runs one method over the schedule: the first non-empty step seeds H_t
/// via nmf_factorize, each later step runs the method, records
/// CScore/DScore/RE/wall-clock, and carries the new topics forward.
/// Empty steps are skipped with a logged gap; a batch smaller than k
/// degrades that step's rank with a warning on its record.
TimeSeriesResult run_stream(const StreamSchedule& schedule, MethodKind method,
                            const JointParams& params,
                            const Vocabulary& vocab, int top_terms_count = 5);

struct MethodAggregate {
  MethodKind method = MethodKind::JointONMF;
  double mean_cscore = 0.0;
  double mean_dscore = 0.0;
  double mean_re = 0.0;
  double mean_wall_clock_s = 0.0;
};

struct MethodComparison {
  std::vector<TimeSeriesResult> results;
  std::vector<MethodAggregate> aggregates;
};

/// Runs every method on the same schedule with the same seed and
/// aggregates per-step metrics into per-method means.
MethodComparison compare_methods(const StreamSchedule& schedule,
                                 const std::vector<MethodKind>& methods,
                                 const JointParams& params,
                                 const Vocabulary& vocab,
                                 int top_terms_count = 5);

}  // namespace topicbridge
