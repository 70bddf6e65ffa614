#include "temport/tagset.hpp"

#include <algorithm>
#include <stdexcept>

#include "temport/error.hpp"

namespace temport {

namespace {

constexpr int kTlBase = 1;
constexpr int kDowBase = 4;
constexpr int kDomBase = 11;
constexpr int kMoyBase = 42;

const std::array<std::string, 3> kTlNames = {"past", "present", "future"};
const std::array<std::string, 7> kDowNames = {"Mon", "Tue", "Wed", "Thu",
                                              "Fri", "Sat", "Sun"};
const std::array<std::string, 12> kMoyNames = {"Jan", "Feb", "Mar", "Apr",
                                               "May", "Jun", "Jul", "Aug",
                                               "Sep", "Oct", "Nov", "Dec"};

std::array<std::string, TemporalTag::kUniverse> build_names() {
  std::array<std::string, TemporalTag::kUniverse> names;
  names[0] = "NA";
  for (int i = 0; i < 3; ++i) names[kTlBase + i] = "TL=" + kTlNames[i];
  for (int i = 0; i < 7; ++i) names[kDowBase + i] = "DOW=" + kDowNames[i];
  for (int i = 0; i < 31; ++i) names[kDomBase + i] = "DOM=" + std::to_string(i + 1);
  for (int i = 0; i < 12; ++i) names[kMoyBase + i] = "MOY=" + kMoyNames[i];
  return names;
}

const std::array<std::string, TemporalTag::kUniverse>& tag_names() {
  static const auto names = build_names();
  return names;
}

}  // namespace

std::string_view type_name(TemporalType t) {
  switch (t) {
    case TemporalType::TL: return "TL";
    case TemporalType::DOW: return "DOW";
    case TemporalType::DOM: return "DOM";
    case TemporalType::MOY: return "MOY";
    case TemporalType::NA: return "NA";
  }
  return "";
}

TemporalTag TemporalTag::day_of_week(int mon0) {
  if (mon0 < 0 || mon0 > 6) throw std::invalid_argument("day_of_week out of range");
  return TemporalTag(kDowBase + mon0);
}

TemporalTag TemporalTag::day_of_month(int dom) {
  if (dom < 1 || dom > 31) throw std::invalid_argument("day_of_month out of range");
  return TemporalTag(kDomBase + dom - 1);
}

TemporalTag TemporalTag::month_of_year(int moy) {
  if (moy < 1 || moy > 12) throw std::invalid_argument("month_of_year out of range");
  return TemporalTag(kMoyBase + moy - 1);
}

TemporalTag TemporalTag::from_id(int id) {
  if (id < 0 || id >= kUniverse) throw std::invalid_argument("tag id out of range");
  return TemporalTag(id);
}

std::optional<TemporalTag> TemporalTag::parse(std::string_view canonical) {
  const auto& names = tag_names();
  for (int i = 0; i < kUniverse; ++i) {
    if (names[i] == canonical) return TemporalTag(i);
  }
  return std::nullopt;
}

TemporalType TemporalTag::type() const {
  if (id_ == 0) return TemporalType::NA;
  if (id_ < kDowBase) return TemporalType::TL;
  if (id_ < kDomBase) return TemporalType::DOW;
  if (id_ < kMoyBase) return TemporalType::DOM;
  return TemporalType::MOY;
}

const std::string& TemporalTag::str() const { return tag_names()[id_]; }

SentenceLabel SentenceLabel::from_tags(const std::vector<TemporalTag>& tags) {
  SentenceLabel label;
  for (TemporalTag t : tags) {
    if (t.is_na()) throw DataError("sentence label may not contain NA");
    if (label.by_type_[int(t.type())] != -1) {
      throw DataError("sentence label has two tags of type " +
                      std::string(type_name(t.type())));
    }
    label.by_type_[int(t.type())] = std::int8_t(t.id());
  }
  return label;
}

void SentenceLabel::set(TemporalTag tag) {
  if (tag.is_na()) throw std::invalid_argument("sentence label may not contain NA");
  if (by_type_[int(tag.type())] != -1) {
    throw std::invalid_argument("sentence label already has a tag of this type");
  }
  by_type_[int(tag.type())] = std::int8_t(tag.id());
}

bool SentenceLabel::contains(TemporalTag tag) const {
  return !tag.is_na() && by_type_[int(tag.type())] == tag.id();
}

std::optional<TemporalTag> SentenceLabel::of_type(TemporalType t) const {
  if (t == TemporalType::NA) return std::nullopt;
  int id = by_type_[int(t)];
  if (id == -1) return std::nullopt;
  return TemporalTag::from_id(id);
}

std::vector<TemporalTag> SentenceLabel::tags() const {
  std::vector<TemporalTag> out;
  for (int id : by_type_) {
    if (id != -1) out.push_back(TemporalTag::from_id(id));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SentenceLabel::size() const {
  std::size_t n = 0;
  for (int id : by_type_) n += (id != -1);
  return n;
}

SentenceLabel derive_tags(Date target, Date reference) {
  SentenceLabel label;
  Timeline tl = target < reference   ? Timeline::Past
                : target > reference ? Timeline::Future
                                     : Timeline::Present;
  label.set(TemporalTag::timeline(tl));
  label.set(TemporalTag::day_of_week(target.weekday()));
  label.set(TemporalTag::day_of_month(target.day()));
  label.set(TemporalTag::month_of_year(target.month()));
  return label;
}

bool tag_consistent(TemporalTag tag, Date candidate, Date reference) {
  if (tag.is_na()) throw std::invalid_argument("tag_consistent: NA has no date semantics");
  return derive_tags(candidate, reference).contains(tag);
}

}  // namespace temport
