#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "temport/corpus.hpp"
#include "temport/events.hpp"
#include "temport/tagset.hpp"

namespace temport {

/// Configuration for the synthetic corpus generator. mention_dropout is the
/// fraction of positive tweets that carry NO time expression despite being
/// about an event (the missing-data violation); lexicon_noise is the
/// probability that a planted expression uses a spelling variant instead of
/// its canonical form.
struct SynthConfig {
  int n_tweets = 1000;
  int n_events = 20;
  std::uint64_t seed = 1;
  double mention_dropout = 0.0;
  double lexicon_noise = 0.0;
  Date range_start = Date::from_ymd(2015, 1, 1);
  Date range_end = Date::from_ymd(2015, 6, 30);
};

struct SynthOutput {
  std::vector<Tweet> corpus;
  std::vector<EventRecord> events;        // the planted (entity, date) pairs
  std::vector<TagSequence> gold_tags;     // aligned with corpus
};

/// Deterministic given the seed: regenerating is byte-identical. Positive
/// tweets plant an entity mention plus surface expressions realizing all
/// four of the event date's tags (weekday and month names, ordinals,
/// relative words and their spelling variants, hashtag forms); negatives are
/// pure filler with an explicit null gold label.
SynthOutput generate(const SynthConfig& cfg);

/// Sidecar gold-tags file: per line, tweet id then space-separated canonical
/// tag strings aligned to tokens.
void save_gold_tags(const std::vector<std::pair<std::string, TagSequence>>& tags,
                    const std::filesystem::path& path);
std::vector<std::pair<std::string, TagSequence>> load_gold_tags(
    const std::filesystem::path& path);

}  // namespace temport
