#include "temport/distant_labels.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "temport/error.hpp"
#include "temport/features.hpp"
#include "temport/rng.hpp"

namespace temport {

namespace {

struct TweetMentionView {
  std::set<std::string> runs;
  std::string joined_lower;
};

TweetMentionView make_view(const Tweet& tweet) {
  TweetMentionView v;
  auto runs = entity_runs(tweet);
  v.runs.insert(runs.begin(), runs.end());
  for (const Token& tok : tweet.tokens) {
    if (!v.joined_lower.empty()) v.joined_lower += ' ';
    v.joined_lower += lowercase(tok.text);
  }
  return v;
}

bool view_mentions(const TweetMentionView& v, const std::string& entity) {
  if (v.runs.count(entity)) return true;
  // NE taggers miss mentions; fall back to plain substring containment.
  return v.joined_lower.find(entity) != std::string::npos;
}

}  // namespace

bool mentions_entity(const Tweet& tweet, const std::string& entity) {
  return view_mentions(make_view(tweet), entity);
}

std::vector<Bag> label_positives(const std::vector<Tweet>& corpus,
                                 const std::vector<EventRecord>& events,
                                 int window_days) {
  if (window_days < 0) throw std::invalid_argument("window_days must be >= 0");

  std::vector<TweetMentionView> views;
  views.reserve(corpus.size());
  for (const Tweet& t : corpus) views.push_back(make_view(t));

  std::vector<Bag> bags;
  for (const EventRecord& ev : events) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Tweet& tweet = corpus[i];
      if (std::abs(tweet.created_at - ev.date) > window_days) continue;
      if (!view_mentions(views[i], ev.entity)) continue;
      Bag bag;
      bag.tweet = tweet;
      bag.label = derive_tags(ev.date, tweet.created_at);
      bag.target = ev.date;
      bag.polarity = Polarity::Positive;
      bags.push_back(std::move(bag));
    }
  }
  return bags;
}

std::vector<Bag> sample_negatives(const std::vector<Tweet>& corpus,
                                  const std::vector<EventRecord>& events,
                                  std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Tweet& tweet = corpus[i];
    if (!tweet.external_dates.empty()) continue;
    TweetMentionView view = make_view(tweet);
    bool mentions = false;
    for (const EventRecord& ev : events) {
      if (view_mentions(view, ev.entity)) {
        mentions = true;
        break;
      }
    }
    if (!mentions) pool.push_back(i);
  }

  Rng rng(seed);
  std::vector<std::size_t> picked = rng.sample_indices(pool.size(), count);

  std::vector<Bag> bags;
  bags.reserve(picked.size());
  for (std::size_t p : picked) {
    Bag bag;
    bag.tweet = corpus[pool[p]];
    bag.polarity = Polarity::Negative;
    bags.push_back(std::move(bag));
  }
  return bags;
}

std::vector<Bag> load_bags(const std::filesystem::path& path) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw DataError("cannot open bag file " + path.string());

  std::vector<Bag> bags;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto at = [&](const std::string& what) {
      return path.string() + ":" + std::to_string(line_no) + ": " + what;
    };
    const std::string context = path.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(at(std::string("invalid JSON: ") + e.what()));
    }

    Bag bag;
    bag.tweet = tweet_from_json_line(line, context);
    if (!j.contains("label") || !j["label"].is_array()) {
      throw DataError(at("missing field 'label'"));
    }
    std::vector<TemporalTag> tags;
    for (const auto& sj : j["label"]) {
      auto tag = TemporalTag::parse(sj.get<std::string>());
      if (!tag) throw DataError(at("unknown tag '" + sj.get<std::string>() + "' in 'label'"));
      tags.push_back(*tag);
    }
    bag.label = SentenceLabel::from_tags(tags);

    if (!j.contains("target")) throw DataError(at("missing field 'target'"));
    if (!j["target"].is_null()) {
      bag.target = Date::parse(j["target"].get<std::string>());
    }

    if (!j.contains("polarity") || !j["polarity"].is_string()) {
      throw DataError(at("missing field 'polarity'"));
    }
    std::string pol = j["polarity"].get<std::string>();
    if (pol == "positive") {
      bag.polarity = Polarity::Positive;
    } else if (pol == "negative") {
      bag.polarity = Polarity::Negative;
    } else {
      throw DataError(at("polarity must be 'positive' or 'negative'"));
    }

    if (bag.polarity == Polarity::Positive) {
      if (!bag.target) throw DataError(at("positive bag requires a target date"));
      if (!(bag.label == derive_tags(*bag.target, bag.tweet.created_at))) {
        throw DataError(at("positive bag label does not match its target date"));
      }
    } else if (bag.target || !bag.label.empty()) {
      throw DataError(at("negative bag must have empty label and null target"));
    }

    bags.push_back(std::move(bag));
  }
  return bags;
}

void save_bags(const std::vector<Bag>& bags, const std::filesystem::path& path) {
  using nlohmann::json;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write bag file " + path.string());
  for (const Bag& bag : bags) {
    json j = json::parse(tweet_to_json_line(bag.tweet));
    json label = json::array();
    for (TemporalTag t : bag.label.tags()) label.push_back(t.str());
    j["label"] = std::move(label);
    if (bag.target) {
      j["target"] = bag.target->str();
    } else {
      j["target"] = nullptr;
    }
    j["polarity"] = bag.polarity == Polarity::Positive ? "positive" : "negative";
    out << j.dump() << '\n';
  }
}

}  // namespace temport
