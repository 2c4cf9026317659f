#include "topicbridge/synth.hpp"

#include <random>
#include <stdexcept>

namespace topicbridge {

namespace {

// Weights over one topic's word block, zero elsewhere.
Vector block_topic(int vocab_size, int block_start, int block_len,
                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Vector topic = Vector::Zero(vocab_size);
  double sum = 0.0;
  for (int i = 0; i < block_len; ++i) {
    double w = dist(rng);
    topic(block_start + i) = w;
    sum += w;
  }
  topic /= sum;
  return topic;
}

std::string sample_words(const Vector& topic, int count,
                         const std::vector<std::string>& terms,
                         std::mt19937_64& rng) {
  std::discrete_distribution<int> dist(topic.data(),
                                       topic.data() + topic.size());
  std::string text;
  for (int i = 0; i < count; ++i) {
    if (i > 0) text += ' ';
    text += terms[dist(rng)];
  }
  return text;
}

}  // namespace

SynthCorpus generate_synth_corpus(const SynthConfig& cfg) {
  if (cfg.months < 1 || cfg.docs_per_source_per_month < 1 ||
      cfg.k_shared < 1 || cfg.k_distinct < 1)
    throw std::invalid_argument("generate_synth_corpus: bad config");
  const int topic_slots = cfg.k_shared + 2 * cfg.k_distinct;
  const int block_len = cfg.vocab_size / topic_slots;
  if (block_len < 4)
    throw std::invalid_argument(
        "generate_synth_corpus: vocab too small for the topic count");

  SynthCorpus corpus;
  corpus.terms.reserve(cfg.vocab_size);
  for (int i = 0; i < cfg.vocab_size; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "term%05d", i);
    corpus.terms.emplace_back(buf);
  }

  std::mt19937_64 topic_rng(cfg.seed);
  corpus.shared_topics.resize(cfg.k_shared, cfg.vocab_size);
  for (int s = 0; s < cfg.k_shared; ++s)
    corpus.shared_topics.row(s) =
        block_topic(cfg.vocab_size, s * block_len, block_len, topic_rng)
            .transpose();

  // Distinct topics are redrawn per month from per-(source, slot) blocks.
  auto distinct_topic = [&](int source, int slot, int month) {
    const int block =
        (cfg.k_shared + source * cfg.k_distinct + slot) * block_len;
    std::mt19937_64 rng(cfg.seed ^
                        (0x5851f42d4c957f2dULL *
                         (static_cast<std::uint64_t>(month) * 64 +
                          source * 8 + slot + 1)));
    return block_topic(cfg.vocab_size, block, block_len, rng);
  };

  std::mt19937_64 doc_rng(cfg.seed + 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> shared_pick(0, cfg.k_shared - 1);
  std::uniform_int_distribution<int> distinct_pick(0, cfg.k_distinct - 1);

  for (int m = 0; m < cfg.months; ++m) {
    const int key = (cfg.start_year * 12 + cfg.start_month - 1) + m;
    Date date{key / 12, key % 12 + 1, 1};
    for (int source = 0; source < 2; ++source) {
      for (int d = 0; d < cfg.docs_per_source_per_month; ++d) {
        Vector topic;
        if (coin(doc_rng) < cfg.shared_prob)
          topic = corpus.shared_topics.row(shared_pick(doc_rng)).transpose();
        else
          topic = distinct_topic(source, distinct_pick(doc_rng), m);
        date.day = 1 + d % 28;

        char id[32];
        std::snprintf(id, sizeof id, "%s-%04d%02d-%04d",
                      source == 0 ? "on" : "off", date.year, date.month, d);
        if (source == 0) {
          corpus.online.push_back(
              {id, Source::online, date,
               sample_words(topic, cfg.online_len, corpus.terms, doc_rng)});
        } else {
          corpus.offline.push_back(
              {id, date,
               sample_words(topic, cfg.title_len, corpus.terms, doc_rng),
               sample_words(topic, cfg.summary_len, corpus.terms, doc_rng),
               sample_words(topic, cfg.body_len, corpus.terms, doc_rng)});
        }
      }
    }
  }
  return corpus;
}

std::vector<Document> offline_documents(
    const std::vector<SynthOfflineRecord>& records,
    const std::string& selector) {
  std::vector<Document> docs;
  docs.reserve(records.size());
  for (const SynthOfflineRecord& rec : records) {
    const std::string* text = nullptr;
    if (selector == "title") text = &rec.title;
    else if (selector == "summary") text = &rec.summary;
    else if (selector == "body") text = &rec.body;
    else throw std::invalid_argument("unknown field selector: " + selector);
    docs.push_back({rec.id, Source::offline, rec.timestamp, *text});
  }
  return docs;
}

}  // namespace topicbridge
