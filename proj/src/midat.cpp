#include "temport/midat.hpp"

#include <array>
#include <numeric>
#include <stdexcept>

#include "train_driver.hpp"

namespace temport {

namespace {

void validate(const MiDaTConfig& cfg) {
  if (cfg.alpha_p > 0.0 || cfg.alpha_r < 0.0) {
    throw std::invalid_argument("require alpha_p <= 0 <= alpha_r");
  }
}

}  // namespace

double joint_score(const RecognizerModel& model, const MiDaTConfig& cfg, const Tweet& tweet,
                   const TagSequence& z, const SentenceLabel& tprime) {
  validate(cfg);
  double word = score(model, tweet, z);

  bool mentioned[TemporalTag::kUniverse] = {};
  for (TemporalTag t : z) {
    if (!t.is_na()) mentioned[t.id()] = true;
  }
  double psi = 0.0;
  for (int id = 1; id < TemporalTag::kUniverse; ++id) {
    bool agree = mentioned[id] == tprime.contains(TemporalTag::from_id(id));
    psi += agree ? cfg.alpha_r : cfg.alpha_p;
  }
  return word + psi;
}

namespace detail {

TagSequence hill_climb(const ScoreMatrix& s, const SentenceLabel& tprime,
                       const MiDaTConfig& cfg, std::span<const int> domain_ids) {
  const std::size_t n = s.size();
  const int max_moves = cfg.resolved_max_moves(n);
  const double flip_conflict = cfg.alpha_p - cfg.alpha_r;  // agree -> disagree
  const double flip_agree = cfg.alpha_r - cfg.alpha_p;     // disagree -> agree

  // Agreement change when a non-NA tag enters (+) or leaves (-) the
  // mentioned set: entering a tprime tag agrees, entering any other tag
  // conflicts; leaving is the mirror image.
  auto enter_delta = [&](int tag_id) {
    return tprime.contains(TemporalTag::from_id(tag_id)) ? flip_agree : flip_conflict;
  };
  auto leave_delta = [&](int tag_id) {
    return tprime.contains(TemporalTag::from_id(tag_id)) ? flip_conflict : flip_agree;
  };

  TagSequence z(n);
  std::array<int, TemporalTag::kUniverse> count{};
  for (std::size_t j = 0; j < n; ++j) {
    int best = domain_ids.front();
    for (int t : domain_ids) {
      if (s[j][std::size_t(t)] > s[j][std::size_t(best)]) best = t;
    }
    z[j] = TemporalTag::from_id(best);
    ++count[std::size_t(best)];
  }

  for (int move = 0; move < max_moves; ++move) {
    double best_gain = 0.0;
    std::size_t best_tok = 0;
    int best_tag = -1;
    for (std::size_t j = 0; j < n; ++j) {
      const int cur = z[j].id();
      for (int t : domain_ids) {
        if (t == cur) continue;
        double gain = s[j][std::size_t(t)] - s[j][std::size_t(cur)];
        if (cur != 0 && count[std::size_t(cur)] == 1) gain += leave_delta(cur);
        if (t != 0 && count[std::size_t(t)] == 0) gain += enter_delta(t);
        if (gain > best_gain) {
          best_gain = gain;
          best_tok = j;
          best_tag = t;
        }
      }
    }
    if (best_tag == -1) break;  // local optimum
    --count[std::size_t(z[best_tok].id())];
    z[best_tok] = TemporalTag::from_id(best_tag);
    ++count[std::size_t(best_tag)];
  }
  return z;
}

}  // namespace detail

TagSequence infer_constrained(ScoreCache& cache, const MiDaTConfig& cfg, const Tweet& tweet,
                              const SentenceLabel& tprime) {
  validate(cfg);
  static const std::vector<int> kFullDomain = [] {
    std::vector<int> d(TemporalTag::kUniverse);
    std::iota(d.begin(), d.end(), 0);
    return d;
  }();
  return detail::hill_climb(score_matrix(cache, tweet), tprime, cfg, kFullDomain);
}

TagSequence infer_constrained(const RecognizerModel& model, const MiDaTConfig& cfg,
                              const Tweet& tweet, const SentenceLabel& tprime) {
  ScoreCache cache(model);
  return infer_constrained(cache, cfg, tweet, tprime);
}

RecognizerModel train_midat(const std::vector<Bag>& bags, const MiDaTConfig& cfg,
                            const TrainConfig& tcfg, TrainStats* stats) {
  validate(cfg);
  nlohmann::json extra;
  extra["alpha_p"] = cfg.alpha_p;
  extra["alpha_r"] = cfg.alpha_r;
  extra["max_moves"] = cfg.max_moves;

  static const std::vector<int> kFullDomain = [] {
    std::vector<int> d(TemporalTag::kUniverse);
    std::iota(d.begin(), d.end(), 0);
    return d;
  }();
  return detail::train_driver(
      bags, tcfg, "midat", std::move(extra),
      [&cfg](ScoreCache&, const ScoreMatrix& s, const Bag& bag) {
        return detail::hill_climb(s, bag.label, cfg, kFullDomain);
      },
      stats);
}

double heuristic_tag_f1(const RecognizerModel& model, const std::vector<Bag>& bags) {
  ScoreCache cache(model);
  long long tp = 0, fp = 0, fn = 0;
  for (const Bag& bag : bags) {
    bool predicted[TemporalTag::kUniverse] = {};
    for (TemporalTag t : infer_free(cache, bag.tweet)) {
      if (!t.is_na()) predicted[t.id()] = true;
    }
    bool gold[TemporalTag::kUniverse] = {};
    for (TemporalTag t : bag.label.tags()) gold[t.id()] = true;
    for (int id = 1; id < TemporalTag::kUniverse; ++id) {
      if (predicted[id] && gold[id]) ++tp;
      if (predicted[id] && !gold[id]) ++fp;
      if (!predicted[id] && gold[id]) ++fn;
    }
  }
  double p = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
  double r = tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
  return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

MiDaTConfig grid_search(const std::vector<Bag>& bags_train, const std::vector<Bag>& bags_dev,
                        const std::vector<std::pair<double, double>>& grid,
                        const TrainConfig& tcfg) {
  if (grid.empty()) throw std::invalid_argument("grid_search requires a non-empty grid");
  MiDaTConfig best;
  double best_f1 = -1.0;
  for (const auto& [alpha_p, alpha_r] : grid) {
    MiDaTConfig cfg;
    cfg.alpha_p = alpha_p;
    cfg.alpha_r = alpha_r;
    RecognizerModel model = train_midat(bags_train, cfg, tcfg);
    double f1 = heuristic_tag_f1(model, bags_dev);
    if (f1 > best_f1) {
      best_f1 = f1;
      best = cfg;
    }
  }
  return best;
}

std::vector<std::pair<double, double>> default_grid() {
  return {
      {-25, 500}, {-25, 400}, {-25, 600},  {-10, 1000}, {-20, 1000}, {-50, 1000},
      {-100, 1000}, {-0.5, 1}, {-1, 2},    {-2, 4},     {-5, 10},
  };
}

}  // namespace temport
