#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "temport/date.hpp"

namespace temport {

enum class TemporalType : std::uint8_t { TL, DOW, DOM, MOY, NA };

inline constexpr int kNumSentenceTypes = 4;  // TL, DOW, DOM, MOY

std::string_view type_name(TemporalType t);

enum class Timeline : std::uint8_t { Past, Present, Future };

/// One of the 54 temporal tag values. Ids are stable across runs and
/// releases: NA=0, TL past/present/future = 1..3, DOW Mon..Sun = 4..10,
/// DOM 1..31 = 11..41, MOY Jan..Dec = 42..53.
class TemporalTag {
 public:
  static constexpr int kUniverse = 54;

  TemporalTag() = default;  // NA

  static TemporalTag na() { return TemporalTag(); }
  static TemporalTag timeline(Timeline v) { return TemporalTag(1 + int(v)); }
  static TemporalTag day_of_week(int mon0);   // 0 = Mon .. 6 = Sun
  static TemporalTag day_of_month(int dom);   // 1..31
  static TemporalTag month_of_year(int moy);  // 1..12
  static TemporalTag from_id(int id);
  static std::optional<TemporalTag> parse(std::string_view canonical);

  int id() const { return id_; }
  TemporalType type() const;
  bool is_na() const { return id_ == 0; }

  /// Canonical string form: "NA", "TL=future", "DOW=Mon", "DOM=9", "MOY=May".
  const std::string& str() const;

  friend auto operator<=>(TemporalTag, TemporalTag) = default;

 private:
  explicit TemporalTag(int id) : id_(std::int8_t(id)) {}
  std::int8_t id_ = 0;
};

using TagSequence = std::vector<TemporalTag>;

/// Sentence-level tag set: at most one tag per temporal type, never NA.
class SentenceLabel {
 public:
  SentenceLabel() = default;
  static SentenceLabel from_tags(const std::vector<TemporalTag>& tags);  // throws DataError

  void set(TemporalTag tag);  // throws std::invalid_argument on NA or duplicate type
  bool contains(TemporalTag tag) const;
  std::optional<TemporalTag> of_type(TemporalType t) const;
  std::vector<TemporalTag> tags() const;  // ascending tag id
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  friend bool operator==(const SentenceLabel&, const SentenceLabel&) = default;

 private:
  std::array<std::int8_t, kNumSentenceTypes> by_type_{-1, -1, -1, -1};
};

/// Tags a target date carries relative to a reference date: TL by three-way
/// comparison, DOW/DOM/MOY from the target's calendar fields.
SentenceLabel derive_tags(Date target, Date reference);

/// True iff the tag is among derive_tags(candidate, reference).
/// Throws std::invalid_argument for NA.
bool tag_consistent(TemporalTag tag, Date candidate, Date reference);

}  // namespace temport
