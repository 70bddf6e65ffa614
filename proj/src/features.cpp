#include "temport/features.hpp"

#include <array>
#include <stdexcept>
#include <unordered_set>

namespace temport {

double SparseVector::get(std::string_view id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? 0.0 : it->second;
}

void SparseVector::set(std::string_view id, double v) {
  if (id.find('\t') != std::string_view::npos || id.find('\n') != std::string_view::npos) {
    throw std::invalid_argument("feature id contains tab or newline");
  }
  auto it = entries_.find(id);
  if (v == 0.0) {
    if (it != entries_.end()) entries_.erase(it);
    return;
  }
  if (it != entries_.end()) {
    it->second = v;
  } else {
    entries_.emplace(std::string(id), v);
  }
}

void SparseVector::add(std::string_view id, double v) {
  auto it = entries_.find(id);
  double next = (it == entries_.end() ? 0.0 : it->second) + v;
  if (it != entries_.end() && next == 0.0) {
    entries_.erase(it);
  } else {
    set(id, next);
  }
}

double SparseVector::dot(const SparseVector& other) const {
  const SparseVector* small = this;
  const SparseVector* large = &other;
  if (small->size() > large->size()) std::swap(small, large);
  double sum = 0.0;
  for (const auto& [id, v] : *small) sum += v * large->get(id);
  return sum;
}

bool SparseVector::contains(std::string_view id) const {
  return entries_.find(id) != entries_.end();
}

std::vector<std::pair<std::string, double>> SparseVector::sorted_entries() const {
  std::vector<std::pair<std::string, double>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace {

constexpr std::array<std::string_view, kNumFeatureGroups> kGroupNames = {
    "temporal_tag", "lexical", "lexical_pos", "day_diff", "week_diff"};

// Function words only; content words always produce lexical features.
const std::unordered_set<std::string_view> kStopwords = {
    "a",    "an",   "the",  "and",  "or",   "but",  "if",    "then",  "than",
    "that", "this", "these", "those", "i",   "you",  "he",    "she",   "it",
    "we",   "they", "me",   "him",  "her",  "us",   "them",  "my",    "your",
    "his",  "its",  "our",  "their", "is",  "am",   "are",   "was",   "were",
    "be",   "been", "being", "do",   "does", "did",  "to",    "of",    "in",
    "on",   "at",   "by",   "for",  "with", "from", "as",    "so",    "not",
    "no"};

bool is_ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace

std::string FeatureGroups::str() const {
  std::string out;
  for (int i = 0; i < kNumFeatureGroups; ++i) {
    if (!enabled(FeatureGroup(i))) continue;
    if (!out.empty()) out += ',';
    out += kGroupNames[i];
  }
  return out;
}

std::optional<FeatureGroup> FeatureGroups::parse_name(std::string_view name) {
  for (int i = 0; i < kNumFeatureGroups; ++i) {
    if (kGroupNames[i] == name) return FeatureGroup(i);
  }
  return std::nullopt;
}

std::string_view FeatureGroups::group_name(FeatureGroup g) { return kGroupNames[int(g)]; }

std::optional<FeatureGroups> FeatureGroups::parse(std::string_view csv) {
  FeatureGroups out = none();
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string_view piece =
        csv.substr(pos, comma == std::string_view::npos ? csv.size() - pos : comma - pos);
    if (!piece.empty()) {
      auto g = parse_name(piece);
      if (!g) return std::nullopt;
      out.enable(*g);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
  }
  return out;
}

std::string word_shape(std::string_view s) {
  std::string out;
  char prev = 0;
  for (char c : s) {
    char mapped;
    if (c >= 'A' && c <= 'Z') {
      mapped = 'X';
    } else if (c >= 'a' && c <= 'z') {
      mapped = 'x';
    } else if (c >= '0' && c <= '9') {
      mapped = '9';
    } else {
      mapped = c;
    }
    if (mapped != prev) out += mapped;
    prev = mapped;
  }
  return out;
}

bool is_stopword(std::string_view lowercased) { return kStopwords.count(lowercased) > 0; }

bool is_url_token(std::string_view lowercased) {
  return lowercased.substr(0, 4) == "http" || lowercased.substr(0, 3) == "www";
}

bool is_punct_token(std::string_view s) {
  for (char c : s) {
    if (is_ascii_alnum(c)) return false;
  }
  return true;
}

std::vector<std::string> word_feature_templates(const Token& token) {
  std::vector<std::string> out;
  const std::string lower = lowercase(token.text);
  out.push_back("W=" + lower);
  out.push_back("SHAPE=" + word_shape(token.text));
  const std::size_t cap = std::min<std::size_t>(3, lower.size());
  for (std::size_t len = 1; len <= cap; ++len) {
    out.push_back("PRE" + std::to_string(len) + "=" + lower.substr(0, len));
  }
  for (std::size_t len = 1; len <= cap; ++len) {
    out.push_back("SUF" + std::to_string(len) + "=" + lower.substr(lower.size() - len));
  }
  out.push_back("BIAS");
  return out;
}

SparseVector word_features(const Token& token, std::size_t /*position*/,
                           std::size_t /*sentence_len*/, TemporalTag tag) {
  SparseVector out;
  for (const std::string& base : word_feature_templates(token)) {
    out.add_indicator(base + "|" + tag.str());
  }
  return out;
}

NormContext make_norm_context(const Tweet& tweet, const TagSequence& extracted) {
  if (extracted.size() != tweet.tokens.size()) {
    throw std::invalid_argument("extracted tag sequence length does not match token count");
  }
  NormContext ctx;
  ctx.created = tweet.created_at;
  ctx.tweet = &tweet;

  bool seen_tag[TemporalTag::kUniverse] = {};
  for (TemporalTag t : extracted) {
    if (!t.is_na() && !seen_tag[t.id()]) {
      seen_tag[t.id()] = true;
      ctx.extracted.push_back(t);
    }
  }
  std::sort(ctx.extracted.begin(), ctx.extracted.end());

  std::unordered_set<std::string> seen_words;
  std::unordered_set<std::string> seen_pairs;
  for (const Token& tok : tweet.tokens) {
    std::string lower = lowercase(tok.text);
    if (is_stopword(lower) || is_url_token(lower) || is_punct_token(tok.text)) continue;
    if (seen_words.insert(lower).second) ctx.lex_words.push_back(lower);
    if (seen_pairs.insert(lower + "\x1f" + tok.pos).second) {
      ctx.lex_pos.emplace_back(lower, tok.pos);
    }
  }
  return ctx;
}

std::string norm_feature_match(TemporalTag tag) { return "MATCH|" + tag.str(); }

std::string norm_feature_match_type(TemporalType t) {
  return "MATCH|" + std::string(type_name(t));
}

std::string norm_feature_spur(TemporalType t) { return "SPUR|" + std::string(type_name(t)); }

std::string norm_feature_miss(TemporalType t) { return "MISS|" + std::string(type_name(t)); }

std::string norm_feature_lex(const std::string& word, TemporalTag ctag) {
  return "W=" + word + "|" + ctag.str();
}

std::string norm_feature_lex_pos(const std::string& word, const std::string& pos,
                                 TemporalTag ctag) {
  return "W=" + word + "|POS=" + pos + "|" + ctag.str();
}

std::string norm_feature_day_diff(int l) { return "DD=" + std::to_string(l); }

std::string norm_feature_week_diff(int k) { return "WD=" + std::to_string(k); }

std::string norm_feature_nullcand_tag(TemporalTag tag) { return "NULLCAND|" + tag.str(); }

namespace {

struct StringSink {
  SparseVector* out;
  void match(TemporalTag t) { out->add_indicator(norm_feature_match(t)); }
  void match_type(TemporalType t) { out->add_indicator(norm_feature_match_type(t)); }
  void spur(TemporalType t) { out->add_indicator(norm_feature_spur(t)); }
  void miss(TemporalType t) { out->add_indicator(norm_feature_miss(t)); }
  void lex(const std::string& w, TemporalTag c) { out->add_indicator(norm_feature_lex(w, c)); }
  void lex_pos(const std::string& w, const std::string& p, TemporalTag c) {
    out->add_indicator(norm_feature_lex_pos(w, p, c));
  }
  void day_diff(int l) { out->add_indicator(norm_feature_day_diff(l)); }
  void week_diff(int k) { out->add_indicator(norm_feature_week_diff(k)); }
  void nullcand() { out->add_indicator(norm_feature_nullcand()); }
  void nullcand_tag(TemporalTag t) { out->add_indicator(norm_feature_nullcand_tag(t)); }
};

}  // namespace

SparseVector norm_features(const Tweet& tweet, const TagSequence& extracted,
                           std::optional<Date> candidate, const FeatureGroups& groups) {
  SparseVector out;
  NormContext ctx = make_norm_context(tweet, extracted);
  for_each_norm_feature(ctx, candidate, groups, StringSink{&out});
  return out;
}

}  // namespace temport
