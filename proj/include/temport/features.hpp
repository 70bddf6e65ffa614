#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "temport/corpus.hpp"
#include "temport/tagset.hpp"

namespace temport {

/// Sparse feature vector keyed by feature-id string. Zero-valued entries are
/// never stored; ids may not contain tab or newline (the model file format
/// reserves them).
class SparseVector {
 public:
  double get(std::string_view id) const;
  void set(std::string_view id, double v);
  void add(std::string_view id, double v);
  void add_indicator(std::string_view id) { set(id, 1.0); }

  double dot(const SparseVector& other) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(std::string_view id) const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Entries ordered lexicographically by id (the serialization order).
  std::vector<std::pair<std::string, double>> sorted_entries() const;

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  struct SvHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  struct SvEq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const { return a == b; }
  };
  std::unordered_map<std::string, double, SvHash, SvEq> entries_;
};

enum class FeatureGroup : std::uint8_t {
  temporal_tag,
  lexical,
  lexical_pos,
  day_diff,
  week_diff,
};

inline constexpr int kNumFeatureGroups = 5;

class FeatureGroups {
 public:
  static FeatureGroups all() { return FeatureGroups(0x1f); }
  static FeatureGroups none() { return FeatureGroups(0); }

  FeatureGroups() : mask_(0x1f) {}

  FeatureGroups& enable(FeatureGroup g) { mask_ |= std::uint8_t(1u << int(g)); return *this; }
  FeatureGroups& disable(FeatureGroup g) { mask_ &= std::uint8_t(~(1u << int(g))); return *this; }
  bool enabled(FeatureGroup g) const { return (mask_ >> int(g)) & 1u; }

  /// Comma-separated canonical names, e.g. "temporal_tag,lexical,day_diff".
  std::string str() const;
  static std::optional<FeatureGroups> parse(std::string_view csv);
  static std::optional<FeatureGroup> parse_name(std::string_view name);
  static std::string_view group_name(FeatureGroup g);

  friend bool operator==(FeatureGroups, FeatureGroups) = default;

 private:
  explicit FeatureGroups(std::uint8_t mask) : mask_(mask) {}
  std::uint8_t mask_;
};

std::string lowercase(std::string_view s);

/// Character-class shape with runs collapsed: uppercase -> X, lowercase -> x,
/// digit -> 9, anything else kept as itself. "2morrow" -> "9x".
std::string word_shape(std::string_view s);

bool is_stopword(std::string_view lowercased);
bool is_url_token(std::string_view lowercased);
bool is_punct_token(std::string_view s);

/// Tag-independent template strings for a token, in emission order:
/// W=, SHAPE=, PRE1..PRE3, SUF1..SUF3 (lengths capped at the word length),
/// BIAS. Word-level feature ids are these conjoined with "|<tag>".
std::vector<std::string> word_feature_templates(const Token& token);

/// Indicator features f(tag, token), all valued 1.0, each id conjoined with
/// the canonical tag string.
SparseVector word_features(const Token& token, std::size_t position,
                           std::size_t sentence_len, TemporalTag tag);

/// Candidate-independent part of the normalizer feature context for one
/// tweet and its extracted tag sequence.
struct NormContext {
  Date created;
  const Tweet* tweet = nullptr;
  std::vector<TemporalTag> extracted;  // distinct non-NA tags, ascending id
  std::vector<std::string> lex_words;  // filtered, lowercased, distinct
  std::vector<std::pair<std::string, std::string>> lex_pos;  // distinct (word, pos)
};

NormContext make_norm_context(const Tweet& tweet, const TagSequence& extracted);

/// Single source of truth for normalizer feature enumeration. The sink
/// receives one call per fired indicator; the string and interned-id
/// representations are both built on top of this.
///
/// Sink interface:
///   match(TemporalTag), match_type(TemporalType), spur(TemporalType),
///   miss(TemporalType), lex(const std::string& word, TemporalTag ctag),
///   lex_pos(const std::string& word, const std::string& pos, TemporalTag ctag),
///   day_diff(int l), week_diff(int k), nullcand(), nullcand_tag(TemporalTag)
template <class Sink>
void for_each_norm_feature(const NormContext& ctx, std::optional<Date> candidate,
                           const FeatureGroups& groups, Sink&& sink) {
  if (!candidate) {
    // The no-date hypothesis fires its own features and nothing else.
    sink.nullcand();
    for (TemporalTag x : ctx.extracted) sink.nullcand_tag(x);
    return;
  }

  const SentenceLabel cand_label = derive_tags(*candidate, ctx.created);

  if (groups.enabled(FeatureGroup::temporal_tag)) {
    bool type_extracted[kNumSentenceTypes] = {};
    bool spur_emitted[kNumSentenceTypes] = {};
    for (TemporalTag x : ctx.extracted) {
      int ti = int(x.type());
      type_extracted[ti] = true;
      if (cand_label.contains(x)) {
        sink.match(x);
        sink.match_type(x.type());
      } else if (!spur_emitted[ti]) {
        sink.spur(x.type());
        spur_emitted[ti] = true;
      }
    }
    for (int ti = 0; ti < kNumSentenceTypes; ++ti) {
      if (!type_extracted[ti]) sink.miss(TemporalType(ti));
    }
  }

  const std::vector<TemporalTag> cand_tags = cand_label.tags();
  if (groups.enabled(FeatureGroup::lexical)) {
    for (TemporalTag c : cand_tags) {
      for (const std::string& w : ctx.lex_words) sink.lex(w, c);
    }
  }
  if (groups.enabled(FeatureGroup::lexical_pos)) {
    for (TemporalTag c : cand_tags) {
      for (const auto& [w, p] : ctx.lex_pos) sink.lex_pos(w, p, c);
    }
  }
  if (groups.enabled(FeatureGroup::day_diff)) {
    sink.day_diff(std::clamp(*candidate - ctx.created, -10, 10));
  }
  if (groups.enabled(FeatureGroup::week_diff)) {
    int k = (candidate->monday_of_week() - ctx.created.monday_of_week()) / 7;
    sink.week_diff(std::clamp(k, -2, 2));
  }
}

/// Normalizer feature vector g(w, d_pub, extracted tags, candidate).
/// candidate == nullopt is the no-date hypothesis.
SparseVector norm_features(const Tweet& tweet, const TagSequence& extracted,
                           std::optional<Date> candidate, const FeatureGroups& groups);

// Feature-id spellings for the normalizer, shared by the string path and the
// interned fast path.
std::string norm_feature_match(TemporalTag tag);
std::string norm_feature_match_type(TemporalType t);
std::string norm_feature_spur(TemporalType t);
std::string norm_feature_miss(TemporalType t);
std::string norm_feature_lex(const std::string& word, TemporalTag ctag);
std::string norm_feature_lex_pos(const std::string& word, const std::string& pos,
                                 TemporalTag ctag);
std::string norm_feature_day_diff(int l);
std::string norm_feature_week_diff(int k);
inline std::string norm_feature_nullcand() { return "NULLCAND"; }
std::string norm_feature_nullcand_tag(TemporalTag tag);
inline std::string norm_feature_external() { return "EXTERNAL"; }

}  // namespace temport
