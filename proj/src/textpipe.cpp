#include "topicbridge/textpipe.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <random>
#include <stdexcept>

namespace topicbridge {

Date parse_date(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("bad timestamp: " + std::string(text));
  };
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') fail();
  Date d;
  auto parse_int = [&](std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail();
  };
  parse_int(text.substr(0, 4), d.year);
  parse_int(text.substr(5, 2), d.month);
  parse_int(text.substr(8, 2), d.day);
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) fail();
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') fail();
  return d;
}

namespace {

bool is_token_char(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;  // keep multi-byte UTF-8 intact
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i])
      return false;
  return true;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    std::size_t end = pos;
    while (end < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[end])))
      ++end;
    std::string_view chunk = text.substr(pos, end - pos);
    pos = end;
    if (chunk.empty()) continue;
    if (starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") ||
        starts_with_ci(chunk, "www."))
      continue;  // URL
    if (chunk.front() == '@') continue;  // user mention
    while (!chunk.empty() && chunk.front() == '#') chunk.remove_prefix(1);

    std::string token;
    auto flush = [&] {
      if (token.size() >= 2) tokens.push_back(token);
      token.clear();
    };
    for (char ch : chunk) {
      auto c = static_cast<unsigned char>(ch);
      if (is_token_char(c))
        token.push_back(static_cast<char>(std::tolower(c)));
      else
        flush();
    }
    flush();
  }
  return tokens;
}

Vocabulary build_vocabulary(const std::vector<Document>& corpus, int min_df,
                            double max_df_ratio,
                            const std::set<std::string>& stopwords) {
  if (corpus.empty())
    throw std::invalid_argument("build_vocabulary: empty corpus");
  if (min_df < 1)
    throw std::invalid_argument("build_vocabulary: min_df must be >= 1");
  if (max_df_ratio <= 0.0 || max_df_ratio > 1.0)
    throw std::invalid_argument(
        "build_vocabulary: max_df_ratio must be in (0, 1]");

  std::map<std::string, int> df;
  for (const Document& doc : corpus) {
    std::set<std::string> seen;
    for (std::string& tok : tokenize(doc.text)) seen.insert(std::move(tok));
    for (const std::string& tok : seen) ++df[tok];
  }

  Vocabulary vocab;
  vocab.num_docs = static_cast<int>(corpus.size());
  for (const auto& [term, count] : df) {  // std::map: lexicographic order
    if (count < min_df) continue;
    if (static_cast<double>(count) / vocab.num_docs > max_df_ratio) continue;
    if (stopwords.contains(term)) continue;
    vocab.index.emplace(term, vocab.size());
    vocab.terms.push_back(term);
    vocab.doc_freq.push_back(count);
  }
  return vocab;
}

Matrix tfidf_matrix(const std::vector<Document>& batch,
                    const Vocabulary& vocab) {
  const int n = vocab.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(batch.size()), n);
  std::vector<double> idf(n);
  for (int j = 0; j < n; ++j)
    idf[j] = std::log((1.0 + vocab.num_docs) / (1.0 + vocab.doc_freq[j])) +
             1.0;

  for (std::size_t d = 0; d < batch.size(); ++d) {
    std::unordered_map<int, int> counts;
    int retained = 0;
    for (const std::string& tok : tokenize(batch[d].text)) {
      auto it = vocab.index.find(tok);
      if (it == vocab.index.end()) continue;  // out-of-vocabulary
      ++counts[it->second];
      ++retained;
    }
    if (retained == 0) continue;  // zero row stays
    for (const auto& [j, count] : counts)
      out(static_cast<Eigen::Index>(d), j) =
          (static_cast<double>(count) / retained) * idf[j];
  }
  return out;
}

StreamSchedule interleave_schedule(const std::vector<Document>& online,
                                   const std::vector<Document>& offline,
                                   Date start_month, Date end_month,
                                   int per_month_cap, std::uint64_t seed) {
  const int first = start_month.month_key();
  const int last = end_month.month_key();
  if (first > last)
    throw std::invalid_argument("interleave_schedule: start after end");

  auto bucket = [&](const std::vector<Document>& docs) {
    std::map<int, std::vector<Document>> by_month;
    for (const Document& doc : docs) {
      const int key = doc.timestamp.month_key();
      if (key < first || key > last)
        throw std::invalid_argument("interleave_schedule: document " +
                                    doc.id + " outside the month range");
      by_month[key].push_back(doc);
    }
    return by_month;
  };
  auto online_by_month = bucket(online);
  auto offline_by_month = bucket(offline);

  StreamSchedule schedule;
  int t = 0;
  for (int key = first; key <= last; ++key) {
    for (Source source : {Source::online, Source::offline}) {
      auto& by_month = source == Source::online ? online_by_month
                                                : offline_by_month;
      StreamStep step;
      step.time_index = t++;
      step.year = key / 12;
      step.month = key % 12 + 1;
      step.source = source;
      step.batch = by_month.count(key) ? by_month[key]
                                       : std::vector<Document>{};
      if (per_month_cap > 0 &&
          static_cast<int>(step.batch.size()) > per_month_cap) {
        std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(key) * 2 +
                                    (source == Source::offline ? 1 : 0)));
        std::vector<Document> sampled;
        std::sample(step.batch.begin(), step.batch.end(),
                    std::back_inserter(sampled), per_month_cap, rng);
        step.batch = std::move(sampled);
      }
      step.empty = step.batch.empty();
      schedule.steps.push_back(std::move(step));
    }
  }
  return schedule;
}

}  // namespace topicbridge
