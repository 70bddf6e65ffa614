#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "temport/date.hpp"

namespace temport {

struct Token {
  std::string text;  // non-empty, no whitespace
  std::string pos;   // opaque POS label, may be empty
  std::string ne;    // opaque NE label, may be empty

  friend bool operator==(const Token&, const Token&) = default;
};

/// Gold annotation for evaluation. Disengaged = tweet not annotated;
/// engaged but empty = annotated as referring to no date.
using GoldDates = std::optional<std::vector<Date>>;

struct Tweet {
  std::string id;
  Date created_at;
  std::vector<Token> tokens;         // length >= 1
  std::vector<Date> external_dates;  // external resolver output, may be empty
  GoldDates gold_dates;

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

/// One JSON object per line; rejects malformed records (naming the line and
/// field) and duplicate ids. Unknown fields are ignored.
std::vector<Tweet> load_corpus(const std::filesystem::path& path);

/// Canonical form: load followed by save is byte-identical to save's output.
void save_corpus(const std::vector<Tweet>& corpus, const std::filesystem::path& path);

std::string tweet_to_json_line(const Tweet& tweet);

/// Parses one corpus-format record; `context` (e.g. "file:12") prefixes
/// error messages. Fields beyond the corpus schema are ignored.
Tweet tweet_from_json_line(const std::string& line, const std::string& context);

struct SplitAssignment {
  std::set<int> train_residues{0, 1, 2};
  std::set<int> dev_residues{4};
  std::set<int> test_residues{3};

  bool valid() const;  // pairwise disjoint subsets of {0..4}
};

/// floor((d - epoch) / 7 days) mod 5, mathematical mod: always in 0..4.
int week_residue(Date d, Date epoch);

struct SplitResult {
  std::vector<Tweet> train;
  std::vector<Tweet> dev;
  std::vector<Tweet> test;
};

/// Partitions by week residue of created_at; tweets matching no residue set
/// are dropped. Input order is preserved within each partition.
SplitResult split_corpus(const std::vector<Tweet>& corpus, const SplitAssignment& sa,
                         Date epoch);

/// Monday on or before the earliest created_at; a fixed Monday for an empty
/// corpus.
Date default_epoch(const std::vector<Tweet>& corpus);

}  // namespace temport
