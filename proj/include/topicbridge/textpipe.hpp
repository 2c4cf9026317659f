#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topicbridge/factorization.hpp"

namespace topicbridge {

enum class Source { online, offline };

struct Date {
  int year = 0;
  int month = 0;  // 1..12
  int day = 1;

  int month_key() const { return year * 12 + (month - 1); }
  auto operator<=>(const Date&) const = default;
};

/// Parses an ISO-8601 date or datetime ("2020-01-05" or
/// "2020-01-05T12:30:00Z"); throws std::invalid_argument on bad input.
Date parse_date(std::string_view text);

struct Document {
  std::string id;
  Source source = Source::online;
  Date timestamp;
  std::string text;
};

/// Global fixed vocabulary (built once over the whole corpus so the term
/// dimension stays constant across time steps).
struct Vocabulary {
  std::vector<std::string> terms;                 // lexicographic order
  std::unordered_map<std::string, int> index;
  std::vector<int> doc_freq;                      // aligned with terms
  int num_docs = 0;

  int size() const { return static_cast<int>(terms.size()); }
};

/// Lowercases, drops URLs and @mentions, strips the '#' of hashtags,
/// splits on non-alphanumeric boundaries, and drops tokens shorter than
/// two characters.
std::vector<std::string> tokenize(std::string_view text);

/// Builds the vocabulary from the full corpus: tokens with
/// min_df <= doc_freq and doc_freq / num_docs <= max_df_ratio, excluding
/// stopwords. Term order is lexicographic.
Vocabulary build_vocabulary(const std::vector<Document>& corpus, int min_df,
                            double max_df_ratio,
                            const std::set<std::string>& stopwords);

/// TF-IDF rows for one batch against the global vocabulary:
/// tf = raw count / retained-token count, idf = ln((1+N)/(1+df)) + 1.
/// Documents with no in-vocabulary tokens become zero rows.
Matrix tfidf_matrix(const std::vector<Document>& batch,
                    const Vocabulary& vocab);

struct StreamStep {
  int time_index = 0;
  int year = 0;
  int month = 0;
  Source source = Source::online;
  std::vector<Document> batch;
  bool empty = false;
};

struct StreamSchedule {
  std::vector<StreamStep> steps;
};

/// Month-by-month interleaving: for each calendar month in
/// [start_month, end_month], one online step then one offline step.
/// Months with no documents still emit a step, flagged empty. A non-zero
/// per_month_cap uniformly subsamples each source's monthly batch with
/// the given seed.
StreamSchedule interleave_schedule(const std::vector<Document>& online,
                                   const std::vector<Document>& offline,
                                   Date start_month, Date end_month,
                                   int per_month_cap = 0,
                                   std::uint64_t seed = 0);

}  // namespace topicbridge
