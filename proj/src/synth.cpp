#include "temport/synth.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "temport/error.hpp"
#include "temport/features.hpp"
#include "temport/rng.hpp"

namespace temport {

namespace {

// Filler vocabulary: 500 pseudo-words built from syllables that share no
// letters with the temporal lexicon's distinctive parts or the entity
// alphabet, so substring entity matching cannot cross-fire.
constexpr std::array<const char*, 30> kFillerSyllables = {
    "ba", "be", "bo", "da", "du", "fa", "fi", "go", "ha", "hi",
    "ka", "ke", "la", "lo", "ma", "mi", "na", "no", "pa", "pe",
    "ra", "ri", "sa", "so", "ta", "ti", "va", "vo", "wa", "wi"};

constexpr int kFillerVocab = 500;

std::string filler_word(int i) {
  return std::string(kFillerSyllables[std::size_t((i / 30) % 30)]) +
         kFillerSyllables[std::size_t(i % 30)];
}

// Entity names: fixed length, pairwise distinct, drawn from an alphabet
// disjoint from the filler syllables.
constexpr std::array<const char*, 10> kEntitySyllables = {
    "zor", "qui", "xev", "jul", "wok", "vyx", "zam", "qep", "xin", "juf"};

std::string entity_name(int i) {
  std::string s = std::string(kEntitySyllables[std::size_t((i / 100) % 10)]) +
                  kEntitySyllables[std::size_t((i / 10) % 10)] +
                  kEntitySyllables[std::size_t(i % 10)];
  s[0] = char(s[0] - 'a' + 'A');
  return s;
}

const std::array<std::vector<std::string>, 7> kDowWords = {{
    {"monday", "mon", "#monday", "mondayy"},
    {"tuesday", "tue", "#tuesday", "tuesdayy"},
    {"wednesday", "wed", "#wednesday", "wednesdayy"},
    {"thursday", "thu", "#thursday", "thursdayy"},
    {"friday", "fri", "#friday", "fridayy"},
    {"saturday", "sat", "#saturday", "saturdayy"},
    {"sunday", "sun", "#sunday", "sundayy"},
}};

const std::array<std::vector<std::string>, 12> kMoyWords = {{
    {"january", "jan", "#january"},
    {"february", "feb", "#february"},
    {"march", "mar", "#march"},
    {"april", "apr", "#april"},
    {"may", "may.", "#may"},
    {"june", "jun", "#june"},
    {"july", "jly", "#july"},
    {"august", "aug", "#august"},
    {"september", "sep", "#september"},
    {"october", "oct", "#october"},
    {"november", "nov", "#november"},
    {"december", "dec", "#december"},
}};

std::string ordinal(int d) {
  const int mod100 = d % 100;
  const int mod10 = d % 10;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    if (mod10 == 1) suffix = "st";
    if (mod10 == 2) suffix = "nd";
    if (mod10 == 3) suffix = "rd";
  }
  return std::to_string(d) + suffix;
}

std::vector<std::string> dom_words(int d) {
  std::string ord = ordinal(d);
  return {ord, "#" + ord, std::to_string(d), "the" + ord};
}

// Timeline words keyed by the offset between event date and creation date;
// exact-offset words (tomorrow/yesterday/today) are only planted where they
// are literally true.
const std::vector<std::string> kTomorrow = {"tomorrow", "2morrow", "2mrw", "tmrw", "2mrow"};
const std::vector<std::string> kYesterday = {"yesterday", "yest", "ystrday", "yda"};
const std::vector<std::string> kToday = {"today", "2day", "tday", "tonite"};
const std::vector<std::string> kFutureGeneric = {"soon", "upcoming", "nextweek", "comingup"};
const std::vector<std::string> kPastGeneric = {"recently", "lastweek", "justpassed", "prior"};

const std::vector<std::string>& tl_words(int offset) {
  if (offset == 1) return kTomorrow;
  if (offset == -1) return kYesterday;
  if (offset == 0) return kToday;
  return offset > 0 ? kFutureGeneric : kPastGeneric;
}

struct ZipfSampler {
  std::vector<double> cumulative;
  explicit ZipfSampler(int n) {
    cumulative.reserve(std::size_t(n));
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
      total += 1.0 / double(r + 1);
      cumulative.push_back(total);
    }
  }
  int draw(Rng& rng) const {
    double u = rng.uniform01() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return int(it - cumulative.begin()) < int(cumulative.size())
               ? int(it - cumulative.begin())
               : int(cumulative.size()) - 1;
  }
};

const std::array<const char*, 4> kFillerPos = {"N", "V", "A", "D"};

}  // namespace

SynthOutput generate(const SynthConfig& cfg) {
  if (cfg.n_tweets < 0) throw DataError("n_tweets must be >= 0");
  if (cfg.n_events < 1 || cfg.n_events > 1000) throw DataError("n_events must be in 1..1000");
  if (cfg.mention_dropout < 0.0 || cfg.mention_dropout > 1.0) {
    throw DataError("mention_dropout must be in [0,1]");
  }
  if (cfg.lexicon_noise < 0.0 || cfg.lexicon_noise > 1.0) {
    throw DataError("lexicon_noise must be in [0,1]");
  }
  if (cfg.range_end < cfg.range_start) throw DataError("date range start must be <= end");

  Rng rng(cfg.seed);
  SynthOutput out;

  const int range_days = cfg.range_end - cfg.range_start;
  for (int e = 0; e < cfg.n_events; ++e) {
    EventRecord ev;
    ev.entity = lowercase(entity_name(e));
    ev.date = cfg.range_start.plus_days(int(rng.below(std::uint64_t(range_days) + 1)));
    ev.score = 0.0;
    out.events.push_back(std::move(ev));
  }

  const int n_pos = cfg.n_tweets * 3 / 5;
  std::vector<char> is_positive(std::size_t(cfg.n_tweets), 0);
  for (int i = 0; i < n_pos; ++i) is_positive[std::size_t(i)] = 1;
  rng.shuffle(is_positive);

  const ZipfSampler filler(kFillerVocab);
  auto pick = [&](const std::vector<std::string>& words) -> const std::string& {
    if (words.size() > 1 && rng.bernoulli(cfg.lexicon_noise)) {
      return words[std::size_t(rng.range(1, int(words.size()) - 1))];
    }
    return words.front();
  };

  for (int i = 0; i < cfg.n_tweets; ++i) {
    Tweet tweet;
    {
      std::ostringstream id;
      id << 't';
      std::string num = std::to_string(i);
      id << std::string(num.size() >= 6 ? 0 : 6 - num.size(), '0') << num;
      tweet.id = id.str();
    }

    const int len = rng.range(8, 15);
    tweet.tokens.resize(std::size_t(len));
    TagSequence tags(std::size_t(len), TemporalTag::na());

    if (is_positive[std::size_t(i)]) {
      const int ev_idx = int(rng.below(std::uint64_t(cfg.n_events)));
      const EventRecord& ev = out.events[std::size_t(ev_idx)];
      const int offset = rng.range(-7, 7);  // event date minus creation date
      tweet.created_at = ev.date.plus_days(-offset);

      const bool dropped = rng.bernoulli(cfg.mention_dropout);
      const std::size_t planted = dropped ? 1 : 5;
      std::vector<std::size_t> slots = rng.sample_indices(std::size_t(len), planted);

      tweet.tokens[slots[0]] = {entity_name(ev_idx), "^", "ENT"};

      if (!dropped) {
        const SentenceLabel label = derive_tags(ev.date, tweet.created_at);
        const Timeline tl = offset > 0   ? Timeline::Future
                            : offset < 0 ? Timeline::Past
                                         : Timeline::Present;
        tweet.tokens[slots[1]] = {pick(tl_words(offset)), "T", ""};
        tags[slots[1]] = TemporalTag::timeline(tl);
        tweet.tokens[slots[2]] = {pick(kDowWords[std::size_t(ev.date.weekday())]), "T", ""};
        tags[slots[2]] = *label.of_type(TemporalType::DOW);
        tweet.tokens[slots[3]] = {pick(dom_words(ev.date.day())), "T", ""};
        tags[slots[3]] = *label.of_type(TemporalType::DOM);
        tweet.tokens[slots[4]] = {pick(kMoyWords[std::size_t(ev.date.month() - 1)]), "T", ""};
        tags[slots[4]] = *label.of_type(TemporalType::MOY);
      }

      for (int j = 0; j < len; ++j) {
        if (!tweet.tokens[std::size_t(j)].text.empty()) continue;
        tweet.tokens[std::size_t(j)] = {filler_word(filler.draw(rng)),
                                        kFillerPos[std::size_t(rng.below(4))], ""};
      }

      if (rng.bernoulli(0.5)) tweet.external_dates.push_back(ev.date);
      if (dropped) {
        tweet.gold_dates = std::vector<Date>{};  // nothing in the text refers to it
      } else {
        tweet.gold_dates = std::vector<Date>{ev.date};
      }
    } else {
      tweet.created_at =
          cfg.range_start.plus_days(rng.range(-7, range_days + 7));
      for (int j = 0; j < len; ++j) {
        tweet.tokens[std::size_t(j)] = {filler_word(filler.draw(rng)),
                                        kFillerPos[std::size_t(rng.below(4))], ""};
      }
      tweet.gold_dates = std::vector<Date>{};
    }

    out.corpus.push_back(std::move(tweet));
    out.gold_tags.push_back(std::move(tags));
  }

  return out;
}

void save_gold_tags(const std::vector<std::pair<std::string, TagSequence>>& tags,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write gold tags file " + path.string());
  for (const auto& [id, seq] : tags) {
    out << id;
    for (TemporalTag t : seq) out << ' ' << t.str();
    out << '\n';
  }
}

std::vector<std::pair<std::string, TagSequence>> load_gold_tags(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open gold tags file " + path.string());
  std::vector<std::pair<std::string, TagSequence>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, tag_str;
    ss >> id;
    if (id.empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": missing id");
    }
    TagSequence seq;
    while (ss >> tag_str) {
      auto tag = TemporalTag::parse(tag_str);
      if (!tag) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": unknown tag '" +
                        tag_str + "'");
      }
      seq.push_back(*tag);
    }
    out.emplace_back(std::move(id), std::move(seq));
  }
  return out;
}

}  // namespace temport
