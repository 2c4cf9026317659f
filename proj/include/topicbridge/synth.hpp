#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topicbridge/textpipe.hpp"

namespace topicbridge {

/// Seeded planted-topic stream generator. Shared topics are fixed over
/// time and feed both sources; each source additionally has drifting
/// distinct topics whose word weights are redrawn every month. Every
/// topic owns a disjoint block of the synthetic vocabulary, so recovery
/// is well-posed at desk scale.
struct SynthConfig {
  int months = 6;
  int docs_per_source_per_month = 200;
  int vocab_size = 500;
  int k_shared = 2;
  int k_distinct = 3;
  std::uint64_t seed = 42;
  int start_year = 2020;
  int start_month = 1;
  double shared_prob = 0.5;  // chance a document draws from a shared topic
  int online_len = 12;
  int title_len = 8;
  int summary_len = 25;
  int body_len = 60;
};

/// One offline record with the three extracted text fields.
struct SynthOfflineRecord {
  std::string id;
  Date timestamp;
  std::string title;
  std::string summary;
  std::string body;
};

struct SynthCorpus {
  std::vector<std::string> terms;          // synthetic vocabulary
  Matrix shared_topics;                    // k_shared x vocab_size truth
  std::vector<Document> online;
  std::vector<SynthOfflineRecord> offline;
};

SynthCorpus generate_synth_corpus(const SynthConfig& config);

/// Offline records as Documents with the chosen field as text
/// (selector: "title", "summary", or "body").
std::vector<Document> offline_documents(
    const std::vector<SynthOfflineRecord>& records,
    const std::string& selector);

}  // namespace topicbridge
