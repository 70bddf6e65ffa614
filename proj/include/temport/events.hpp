#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "temport/corpus.hpp"

namespace temport {

/// 2x2 co-occurrence counts over (tweet, resolved-date) observations:
/// entity&date, entity&!date, !entity&date, !entity&!date.
struct ContingencyTable {
  std::int64_t n_ed = 0;
  std::int64_t n_eD = 0;
  std::int64_t n_Ed = 0;
  std::int64_t n_ED = 0;

  std::int64_t total() const { return n_ed + n_eD + n_Ed + n_ED; }
  /// Expected entity&date count under independence of the margins.
  double expected_ed() const;
};

struct EventRecord {
  std::string entity;  // lowercased surface form
  Date date;
  double score = 0.0;  // G-squared statistic
};

/// Log-likelihood-ratio statistic 2 * sum O*ln(O/E); zero-count cells
/// contribute nothing.
double g_squared(const ContingencyTable& t);

/// Maximal contiguous token runs sharing a non-empty ne label, lowercased
/// and space-joined; distinct per tweet, sorted.
std::vector<std::string> entity_runs(const Tweet& tweet);

/// One observation per (tweet, distinct resolved date) pair. The map covers
/// every (entity, date) pair observed together at least once.
std::map<std::pair<std::string, Date>, ContingencyTable> count_cooccurrences(
    const std::vector<Tweet>& corpus);

/// Top-k positively associated pairs with n_ed >= min_count, sorted by score
/// descending, ties by (entity, date).
std::vector<EventRecord> extract_events(const std::vector<Tweet>& corpus,
                                        std::size_t top_k, std::int64_t min_count = 3);

/// Event database file: entity<TAB>date<TAB>score per line.
std::vector<EventRecord> load_events(const std::filesystem::path& path);
void save_events(const std::vector<EventRecord>& events, const std::filesystem::path& path);

}  // namespace temport
