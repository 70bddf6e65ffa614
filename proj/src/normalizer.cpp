#include "temport/normalizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "temport/error.hpp"
#include "temport/model_io.hpp"
#include "temport/rng.hpp"

namespace temport {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::vector<Candidate> gen_candidates(Date pub) {
  std::vector<Candidate> out;
  out.reserve(22);
  for (int l = -10; l <= 10; ++l) out.push_back(Candidate::at(pub.plus_days(l)));
  out.push_back(Candidate::null_hyp());
  return out;
}

void NormalizerModel::save(const std::filesystem::path& path) const {
  nlohmann::json meta = metadata;
  meta["groups"] = groups.str();
  meta["threshold"] = threshold;
  save_model_file(path, "normalizer", meta, weights_.to_sparse());
}

NormalizerModel NormalizerModel::load(const std::filesystem::path& path) {
  LoadedModel raw = load_model_file(path);
  if (raw.component != "normalizer") {
    throw DataError(path.string() + ": component '" + raw.component +
                    "' is not a normalizer model");
  }
  NormalizerModel model;
  model.metadata = raw.metadata;
  if (raw.metadata.contains("groups")) {
    auto groups = FeatureGroups::parse(raw.metadata["groups"].get<std::string>());
    if (!groups) throw DataError(path.string() + ": bad 'groups' metadata");
    model.groups = *groups;
  }
  if (raw.metadata.contains("threshold")) {
    model.threshold = raw.metadata["threshold"].get<double>();
  }
  model.weights_.assign_from(raw.weights);
  return model;
}

double classify(const NormalizerModel& model, const Tweet& tweet,
                const TagSequence& extracted, const Candidate& cand) {
  SparseVector g = norm_features(tweet, extracted, cand.date, model.groups);
  double dot = 0.0;
  for (const auto& [id, v] : g) dot += v * model.weight(id);
  if (cand.external) dot += model.weight(norm_feature_external());
  return sigmoid(dot);
}

// ---------------------------------------------------------------------------
// Interned fast path.

namespace {

std::vector<int> make_slots() { return std::vector<int>(TemporalTag::kUniverse, -2); }

}  // namespace

NormFeatureCache::NormFeatureCache(NormalizerModel* model)
    : model_(model), interning_(true) {}

NormFeatureCache::NormFeatureCache(const NormalizerModel& model)
    : model_(const_cast<NormalizerModel*>(&model)), interning_(false) {}

int NormFeatureCache::id_of(const std::string& name) const {
  return interning_ ? model_->raw().index().intern(name) : model_->raw().index().find(name);
}

int NormFeatureCache::lex_slot(std::unordered_map<std::string, std::vector<int>>& table,
                               const std::string& key, int tag_id, const std::string& name) {
  auto [it, inserted] = table.try_emplace(key);
  if (inserted) it->second = make_slots();
  int& slot = it->second[std::size_t(tag_id)];
  if (slot == -2) slot = id_of(name);
  return slot;
}

struct NormIdSink {
  NormFeatureCache* cache;
  std::vector<int>* out;

  void push(int id) {
    if (id >= 0) out->push_back(id);
  }

  void match(TemporalTag t) {
    auto& ids = cache->match_ids_;
    if (ids.empty()) ids = make_slots();
    int& slot = ids[std::size_t(t.id())];
    if (slot == -2) slot = cache->id_of(norm_feature_match(t));
    push(slot);
  }
  void match_type(TemporalType t) {
    auto& ids = cache->match_type_ids_;
    if (ids.empty()) ids.assign(kNumSentenceTypes, -2);
    int& slot = ids[std::size_t(int(t))];
    if (slot == -2) slot = cache->id_of(norm_feature_match_type(t));
    push(slot);
  }
  void spur(TemporalType t) {
    auto& ids = cache->spur_ids_;
    if (ids.empty()) ids.assign(kNumSentenceTypes, -2);
    int& slot = ids[std::size_t(int(t))];
    if (slot == -2) slot = cache->id_of(norm_feature_spur(t));
    push(slot);
  }
  void miss(TemporalType t) {
    auto& ids = cache->miss_ids_;
    if (ids.empty()) ids.assign(kNumSentenceTypes, -2);
    int& slot = ids[std::size_t(int(t))];
    if (slot == -2) slot = cache->id_of(norm_feature_miss(t));
    push(slot);
  }
  void lex(const std::string& w, TemporalTag c) {
    push(cache->lex_slot(cache->lex_ids_, w, c.id(), norm_feature_lex(w, c)));
  }
  void lex_pos(const std::string& w, const std::string& p, TemporalTag c) {
    push(cache->lex_slot(cache->lex_pos_ids_, w + '\x1f' + p, c.id(),
                         norm_feature_lex_pos(w, p, c)));
  }
  void day_diff(int l) {
    auto& ids = cache->dd_ids_;
    if (ids.empty()) ids.assign(21, -2);
    int& slot = ids[std::size_t(l + 10)];
    if (slot == -2) slot = cache->id_of(norm_feature_day_diff(l));
    push(slot);
  }
  void week_diff(int k) {
    auto& ids = cache->wd_ids_;
    if (ids.empty()) ids.assign(5, -2);
    int& slot = ids[std::size_t(k + 2)];
    if (slot == -2) slot = cache->id_of(norm_feature_week_diff(k));
    push(slot);
  }
  void nullcand() {
    if (cache->nullcand_id_ == -2) cache->nullcand_id_ = cache->id_of(norm_feature_nullcand());
    push(cache->nullcand_id_);
  }
  void nullcand_tag(TemporalTag t) {
    auto& ids = cache->nullcand_tag_ids_;
    if (ids.empty()) ids = make_slots();
    int& slot = ids[std::size_t(t.id())];
    if (slot == -2) slot = cache->id_of(norm_feature_nullcand_tag(t));
    push(slot);
  }
};

void NormFeatureCache::collect(const NormContext& ctx, std::optional<Date> candidate,
                               bool external, std::vector<int>& out) {
  out.clear();
  for_each_norm_feature(ctx, candidate, model_->groups, NormIdSink{this, &out});
  if (external) {
    if (external_id_ == -2) external_id_ = id_of(norm_feature_external());
    if (external_id_ >= 0) out.push_back(external_id_);
  }
}

// ---------------------------------------------------------------------------
// Training.

NormalizerModel train_normalizer(const std::vector<Bag>& bags,
                                 const RecognizerModel& recognizer,
                                 const FeatureGroups& groups, const TrainConfig& cfg,
                                 double l2, double threshold) {
  if (bags.empty()) throw std::invalid_argument("training requires at least one bag");
  if (cfg.epochs < 0) throw std::invalid_argument("epochs must be >= 0");

  NormalizerModel model;
  model.groups = groups;
  model.threshold = threshold;

  // Candidate-independent context per bag, tagged by free inference.
  ScoreCache rec_cache(recognizer);
  std::vector<NormContext> contexts;
  contexts.reserve(bags.size());
  for (const Bag& bag : bags) {
    contexts.push_back(make_norm_context(bag.tweet, infer_free(rec_cache, bag.tweet)));
  }

  NormFeatureCache cache(&model);
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(bags.size());
  std::iota(order.begin(), order.end(), std::size_t(0));

  // Weights kept as scale * v so the L2 decay is O(1) per example.
  double scale = 1.0;
  std::vector<double> v;
  const double lr = cfg.learning_rate;
  std::vector<int> ids;

  auto fold_scale = [&]() {
    for (double& x : v) x *= scale;
    scale = 1.0;
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(order);
    for (std::size_t bi : order) {
      const Bag& bag = bags[bi];
      const NormContext& ctx = contexts[bi];
      for (const Candidate& cand : gen_candidates(bag.tweet.created_at)) {
        double y;
        if (bag.polarity == Polarity::Positive) {
          y = (cand.date && bag.target && *cand.date == *bag.target) ? 1.0 : 0.0;
        } else {
          y = cand.date ? 0.0 : 1.0;
        }
        cache.collect(ctx, cand.date, cand.external, ids);
        double dot = 0.0;
        for (int id : ids) {
          if (id < int(v.size())) dot += v[std::size_t(id)];
        }
        double p = sigmoid(scale * dot);
        double g = lr * (y - p);
        scale *= 1.0 - lr * l2;
        if (scale < 1e-100) fold_scale();
        for (int id : ids) {
          if (id >= int(v.size())) v.resize(std::size_t(id) + 1, 0.0);
          v[std::size_t(id)] += g / scale;
        }
      }
    }
  }

  for (int id = 0; id < int(v.size()); ++id) {
    model.raw().set_by_id(id, scale * v[std::size_t(id)]);
  }

  nlohmann::json meta;
  meta["component"] = "normalizer";
  meta["epochs"] = cfg.epochs;
  meta["learning_rate"] = cfg.learning_rate;
  meta["seed"] = cfg.seed;
  meta["shuffle"] = cfg.shuffle;
  meta["l2"] = l2;
  meta["bags"] = bags.size();
  meta["recognizer"] = recognizer.component;
  model.metadata = std::move(meta);
  return model;
}

// ---------------------------------------------------------------------------
// Resolution.

Resolution decode(const CandidateScores& scores, double threshold) {
  const double cut = std::max(threshold, scores.null_prob);
  Resolution out;
  for (const ScoredDate& sd : scores.dates) {
    if (sd.confidence > cut) out.dates.push_back(sd);
  }
  std::sort(out.dates.begin(), out.dates.end(), [](const ScoredDate& a, const ScoredDate& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.date < b.date;
  });
  return out;
}

Resolver::Resolver(const RecognizerModel& recognizer, const NormalizerModel& normalizer)
    : recognizer_(&recognizer),
      normalizer_(&normalizer),
      rec_cache_(recognizer),
      norm_cache_(normalizer) {}

TagSequence Resolver::tag(const Tweet& tweet) { return infer_free(rec_cache_, tweet); }

CandidateScores Resolver::score_candidates(const Tweet& tweet, const TagSequence& extracted,
                                           const std::vector<Date>& external_dates) {
  NormContext ctx = make_norm_context(tweet, extracted);
  const SparseWeights& w = normalizer_->raw();
  auto prob = [&](std::optional<Date> date, bool external) {
    norm_cache_.collect(ctx, date, external, scratch_);
    return sigmoid(w.dot_ids(scratch_));
  };

  CandidateScores scores;
  scores.null_prob = prob(std::nullopt, false);
  std::map<Date, double> best;  // dedup, keep max confidence
  for (int l = -10; l <= 10; ++l) {
    Date d = tweet.created_at.plus_days(l);
    double p = prob(d, false);
    auto [it, inserted] = best.emplace(d, p);
    if (!inserted && p > it->second) it->second = p;
  }
  for (Date d : external_dates) {
    double p = prob(d, true);
    auto [it, inserted] = best.emplace(d, p);
    if (!inserted && p > it->second) it->second = p;
  }
  scores.dates.reserve(best.size());
  for (const auto& [d, p] : best) scores.dates.push_back({d, p});
  return scores;
}

Resolution Resolver::resolve(const Tweet& tweet, const TagSequence& extracted,
                             const std::vector<Date>& external_dates) {
  return decode(score_candidates(tweet, extracted, external_dates), normalizer_->threshold);
}

Resolution Resolver::resolve(const Tweet& tweet, const std::vector<Date>& external_dates) {
  return resolve(tweet, tag(tweet), external_dates);
}

std::vector<std::string> Resolver::fired_features(const Tweet& tweet,
                                                  const TagSequence& extracted,
                                                  const Candidate& cand) const {
  SparseVector g = norm_features(tweet, extracted, cand.date, normalizer_->groups);
  std::vector<std::string> out;
  for (const auto& [id, v] : g) {
    (void)v;
    out.push_back(id);
  }
  if (cand.external) out.push_back(norm_feature_external());
  std::sort(out.begin(), out.end());
  return out;
}

Resolution resolve(const NormalizerModel& model, const RecognizerModel& recognizer,
                   const Tweet& tweet, const TagSequence& extracted,
                   const std::vector<Date>& external_dates) {
  Resolver resolver(recognizer, model);
  return resolver.resolve(tweet, extracted, external_dates);
}

// ---------------------------------------------------------------------------
// Resolution file I/O.

void save_resolutions(std::span<const ResolutionRecord> records,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write resolutions file " + path.string());
  for (const ResolutionRecord& rec : records) {
    nlohmann::json j;
    j["id"] = rec.id;
    nlohmann::json dates = nlohmann::json::array();
    for (const ScoredDate& sd : rec.res.dates) {
      dates.push_back({{"date", sd.date.str()}, {"confidence", sd.confidence}});
    }
    j["dates"] = std::move(dates);
    if (!rec.top_features.empty()) j["top_features"] = rec.top_features;
    out << j.dump() << '\n';
  }
}

std::vector<ResolutionRecord> load_resolutions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open resolutions file " + path.string());
  std::vector<ResolutionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto at = [&](const std::string& what) {
      return DataError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw at(std::string("invalid JSON: ") + e.what());
    }
    ResolutionRecord rec;
    if (!j.contains("id") || !j["id"].is_string()) throw at("missing field 'id'");
    rec.id = j["id"].get<std::string>();
    if (!j.contains("dates") || !j["dates"].is_array()) throw at("missing field 'dates'");
    for (const auto& dj : j["dates"]) {
      if (!dj.contains("date") || !dj.contains("confidence")) {
        throw at("date entries need 'date' and 'confidence'");
      }
      rec.res.dates.push_back(
          {Date::parse(dj["date"].get<std::string>()), dj["confidence"].get<double>()});
    }
    if (j.contains("top_features")) {
      for (const auto& f : j["top_features"]) rec.top_features.push_back(f.get<std::string>());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace temport
