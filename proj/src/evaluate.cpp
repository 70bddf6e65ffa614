#include "temport/evaluate.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "temport/error.hpp"

namespace temport {

PRF PRF::from_counts(long long tp, long long fp, long long fn) {
  PRF out;
  out.tp = tp;
  out.fp = fp;
  out.fn = fn;
  out.precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
  out.recall = tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
  out.f1 = out.precision + out.recall > 0.0
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

PRF tag_prf(std::span<const TagSequence> gold, std::span<const TagSequence> pred) {
  if (gold.size() != pred.size()) {
    throw DataError("tag evaluation: gold and predicted corpora have different sizes");
  }
  long long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size()) {
      throw DataError("tag evaluation: sequence length mismatch at record " +
                      std::to_string(i + 1));
    }
    for (std::size_t j = 0; j < gold[i].size(); ++j) {
      const TemporalTag g = gold[i][j];
      const TemporalTag p = pred[i][j];
      if (!p.is_na()) {
        if (p == g) {
          ++tp;
        } else {
          ++fp;
        }
      }
      if (!g.is_na() && p != g) ++fn;
    }
  }
  return PRF::from_counts(tp, fp, fn);
}

PRF date_prf(const std::vector<std::pair<std::string, std::vector<Date>>>& gold,
             const std::map<std::string, Resolution>& pred) {
  std::unordered_set<std::string> known;
  for (const auto& [id, dates] : gold) known.insert(id);
  for (const auto& [id, res] : pred) {
    if (!known.count(id)) throw DataError("prediction for unknown tweet id '" + id + "'");
  }

  long long tp = 0, fp = 0, fn = 0;
  for (const auto& [id, gold_dates] : gold) {
    std::set<Date> gold_set(gold_dates.begin(), gold_dates.end());
    std::set<Date> pred_set;
    auto it = pred.find(id);
    if (it != pred.end()) {
      for (const ScoredDate& sd : it->second.dates) pred_set.insert(sd.date);
    }
    for (Date d : pred_set) {
      if (gold_set.count(d)) {
        ++tp;
      } else {
        ++fp;
      }
    }
    for (Date d : gold_set) {
      if (!pred_set.count(d)) ++fn;
    }
  }
  return PRF::from_counts(tp, fp, fn);
}

double date_accuracy(const std::vector<std::pair<std::string, std::vector<Date>>>& gold,
                     const std::map<std::string, Resolution>& pred) {
  if (gold.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& [id, gold_dates] : gold) {
    std::set<Date> gold_set(gold_dates.begin(), gold_dates.end());
    std::set<Date> pred_set;
    auto it = pred.find(id);
    if (it != pred.end()) {
      for (const ScoredDate& sd : it->second.dates) pred_set.insert(sd.date);
    }
    if (gold_set == pred_set) ++hits;
  }
  return double(hits) / double(gold.size());
}

std::vector<SweepRow> sweep(const RecognizerModel& recognizer, const NormalizerModel& model,
                            const std::vector<Tweet>& dev, std::span<const double> thresholds,
                            bool use_external) {
  Resolver resolver(recognizer, model);

  std::vector<std::pair<std::string, std::vector<Date>>> gold;
  std::vector<CandidateScores> scored;
  for (const Tweet& tweet : dev) {
    if (!tweet.gold_dates) continue;
    gold.emplace_back(tweet.id, *tweet.gold_dates);
    scored.push_back(resolver.score_candidates(
        tweet, resolver.tag(tweet),
        use_external ? tweet.external_dates : std::vector<Date>{}));
  }

  std::vector<SweepRow> rows;
  for (double threshold : thresholds) {
    std::map<std::string, Resolution> pred;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      pred[gold[i].first] = decode(scored[i], threshold);
    }
    rows.push_back({threshold, date_prf(gold, pred)});
  }
  return rows;
}

std::span<const std::string_view> error_category_labels() {
  static constexpr std::array<std::string_view, 7> kLabels = {
      "spelling_variation", "ambiguity",    "missing_rule",   "tokenization",
      "hashtag",            "out_of_range", "over_prediction"};
  return kLabels;
}

namespace {

nlohmann::json prf_json(const PRF& prf) {
  nlohmann::json j;
  j["precision"] = prf.precision;
  j["recall"] = prf.recall;
  j["f1"] = prf.f1;
  j["tp"] = prf.tp;
  j["fp"] = prf.fp;
  j["fn"] = prf.fn;
  return j;
}

}  // namespace

nlohmann::json date_eval_report(
    const std::vector<std::pair<std::string, std::vector<Date>>>& gold,
    const std::vector<ResolutionRecord>& pred) {
  std::map<std::string, Resolution> pred_map;
  std::unordered_map<std::string, const ResolutionRecord*> rec_map;
  for (const ResolutionRecord& rec : pred) {
    pred_map[rec.id] = rec.res;
    rec_map[rec.id] = &rec;
  }

  nlohmann::json report = prf_json(date_prf(gold, pred_map));
  report["mode"] = "dates";
  report["accuracy"] = date_accuracy(gold, pred_map);
  nlohmann::json cats = nlohmann::json::array();
  for (std::string_view c : error_category_labels()) cats.push_back(std::string(c));
  report["error_categories"] = std::move(cats);

  nlohmann::json tweets = nlohmann::json::array();
  for (const auto& [id, gold_dates] : gold) {
    nlohmann::json tj;
    tj["id"] = id;
    nlohmann::json gj = nlohmann::json::array();
    for (Date d : gold_dates) gj.push_back(d.str());
    tj["gold"] = std::move(gj);
    nlohmann::json pj = nlohmann::json::array();
    if (auto it = rec_map.find(id); it != rec_map.end()) {
      for (const ScoredDate& sd : it->second->res.dates) {
        pj.push_back({{"date", sd.date.str()}, {"confidence", sd.confidence}});
      }
      if (!it->second->top_features.empty()) tj["top_features"] = it->second->top_features;
    }
    tj["predicted"] = std::move(pj);
    tj["category"] = nullptr;  // for manual error annotation
    tweets.push_back(std::move(tj));
  }
  report["tweets"] = std::move(tweets);
  return report;
}

nlohmann::json tags_eval_report(
    const std::vector<std::pair<std::string, TagSequence>>& gold,
    const std::vector<std::pair<std::string, TagSequence>>& pred) {
  std::unordered_map<std::string, const TagSequence*> pred_map;
  for (const auto& [id, seq] : pred) pred_map[id] = &seq;

  std::vector<TagSequence> gold_seqs, pred_seqs;
  for (const auto& [id, seq] : gold) {
    auto it = pred_map.find(id);
    if (it == pred_map.end()) throw DataError("no prediction for tweet id '" + id + "'");
    gold_seqs.push_back(seq);
    pred_seqs.push_back(*it->second);
  }
  if (pred.size() != gold.size()) {
    throw DataError("tag evaluation: gold and predicted id sets differ in size");
  }

  nlohmann::json report = prf_json(tag_prf(gold_seqs, pred_seqs));
  report["mode"] = "tags";
  report["records"] = gold.size();
  return report;
}

nlohmann::json sweep_report(std::span<const SweepRow> rows) {
  nlohmann::json report;
  report["mode"] = "sweep";
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    nlohmann::json rj = prf_json(row.prf);
    rj["threshold"] = row.threshold;
    arr.push_back(std::move(rj));
  }
  report["rows"] = std::move(arr);
  return report;
}

}  // namespace temport
