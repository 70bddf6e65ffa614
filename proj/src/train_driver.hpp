#pragma once

// Shared SGD driver for the recognizer trainers. Internal to src/.

#include <numeric>
#include <stdexcept>
#include <vector>

#include "temport/multit.hpp"
#include "temport/rng.hpp"

namespace temport::detail {

/// Per bag: z_plus = clamped_fn(cache, scores, bag), z_minus = free argmax,
/// then weights += lr * (F(z_plus) - F(z_minus)). With averaging on, the
/// returned weights are the mean of the weight vector after every bag visit
/// (accumulated lazily: avg = w - u/T with u summing (step-1)*delta).
template <class ClampedFn>
RecognizerModel train_driver(const std::vector<Bag>& bags, const TrainConfig& cfg,
                             const std::string& component, nlohmann::json extra_metadata,
                             ClampedFn&& clamped_fn, TrainStats* stats) {
  if (bags.empty()) throw std::invalid_argument("training requires at least one bag");
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be > 0");

  RecognizerModel model;
  model.component = component;
  ScoreCache cache(&model);
  Rng rng(cfg.seed);

  std::vector<double> avg_accum;
  auto bump = [&](int id, double delta, double step_weight) {
    model.raw().add_by_id(id, delta);
    if (cfg.averaging) {
      if (id >= int(avg_accum.size())) avg_accum.resize(std::size_t(id) + 1, 0.0);
      avg_accum[std::size_t(id)] += step_weight * delta;
    }
  };

  std::vector<std::size_t> order(bags.size());
  std::iota(order.begin(), order.end(), std::size_t(0));

  TrainStats local_stats;
  const double lr = cfg.learning_rate;
  std::size_t step = 0;

  std::vector<const ScoreCache::TokenIds*> toks;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(order);
    for (std::size_t bi : order) {
      ++step;
      const Bag& bag = bags[bi];
      const std::size_t n = bag.tweet.tokens.size();

      toks.clear();
      ScoreMatrix s(n);
      for (std::size_t j = 0; j < n; ++j) {
        toks.push_back(&cache.token_ids(bag.tweet.tokens[j].text));
        cache.scores(*toks.back(), s[j]);
      }

      TagSequence z_plus;
      try {
        z_plus = clamped_fn(cache, s, bag);
      } catch (const InfeasibleBag&) {
        ++local_stats.infeasible_skipped;
        continue;
      }
      TagSequence z_minus = argmax_per_token(s);

      const double step_weight = double(step - 1);
      for (std::size_t j = 0; j < n; ++j) {
        if (z_plus[j] == z_minus[j]) continue;
        for (int id : toks[j]->for_tag(z_plus[j].id())) bump(id, lr, step_weight);
        for (int id : toks[j]->for_tag(z_minus[j].id())) bump(id, -lr, step_weight);
      }
    }
  }

  if (cfg.averaging && step > 0) {
    for (int id = 0; id < int(avg_accum.size()); ++id) {
      model.raw().add_by_id(id, -avg_accum[std::size_t(id)] / double(step));
    }
  }

  nlohmann::json meta;
  meta["component"] = component;
  meta["epochs"] = cfg.epochs;
  meta["learning_rate"] = cfg.learning_rate;
  meta["seed"] = cfg.seed;
  meta["shuffle"] = cfg.shuffle;
  meta["averaging"] = cfg.averaging;
  meta["bags"] = bags.size();
  meta["infeasible_skipped"] = local_stats.infeasible_skipped;
  for (auto& [k, v] : extra_metadata.items()) meta[k] = v;
  model.metadata = std::move(meta);

  if (stats) *stats = local_stats;
  return model;
}

}  // namespace temport::detail
