#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "temport/corpus.hpp"
#include "temport/events.hpp"
#include "temport/tagset.hpp"

namespace temport {

enum class Polarity : std::uint8_t { Positive, Negative };

/// One training instance: a tweet plus its heuristic sentence-level tags.
/// Positive bags carry the event date they were labeled from; negative bags
/// carry neither tags nor a target.
struct Bag {
  Tweet tweet;
  SentenceLabel label;
  std::optional<Date> target;
  Polarity polarity = Polarity::Negative;
};

/// True if the tweet mentions the (lowercased) entity: either an exact match
/// against one of its NE runs or a substring of its space-joined lowercase
/// token text.
bool mentions_entity(const Tweet& tweet, const std::string& entity);

/// For each event (e, d) and each tweet mentioning e with
/// |created_at - d| <= window_days, one positive bag labeled
/// derive_tags(d, created_at). Output ordered by (event index, tweet index).
std::vector<Bag> label_positives(const std::vector<Tweet>& corpus,
                                 const std::vector<EventRecord>& events,
                                 int window_days = 7);

/// Seeded uniform sample of tweets that mention no event entity and carry no
/// external dates. Returns the whole qualifying pool when count exceeds it.
std::vector<Bag> sample_negatives(const std::vector<Tweet>& corpus,
                                  const std::vector<EventRecord>& events,
                                  std::size_t count, std::uint64_t seed);

/// Bag file: corpus line format plus "label", "target" and "polarity".
std::vector<Bag> load_bags(const std::filesystem::path& path);
void save_bags(const std::vector<Bag>& bags, const std::filesystem::path& path);

}  // namespace temport
