#include "temport/multit.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "temport/rng.hpp"
#include "temport/synth.hpp"
#include "test_helpers.hpp"

using namespace temport;
using testutil::make_tweet;
using testutil::tag;

namespace {

// Model with N(0,1) weights on every feature of every (token, tag) pair the
// tweet can produce, restricted to the given tags.
RecognizerModel random_model(const Tweet& tweet, const std::vector<TemporalTag>& tags,
                             Rng& rng) {
  RecognizerModel model;
  for (const Token& tok : tweet.tokens) {
    for (TemporalTag t : tags) {
      for (const std::string& base : word_feature_templates(tok)) {
        model.set_weight(base + "|" + t.str(), rng.normal());
      }
    }
  }
  return model;
}

std::vector<TemporalTag> full_universe() {
  std::vector<TemporalTag> tags;
  for (int id = 0; id < TemporalTag::kUniverse; ++id) tags.push_back(TemporalTag::from_id(id));
  return tags;
}

Tweet random_tweet(Rng& rng, int n_tokens) {
  static const std::vector<std::string> kWords = {"alpha", "bravo", "charlie", "delta",
                                                  "echo",  "fox",   "golf",    "hotel"};
  Tweet t;
  t.id = "r";
  t.created_at = Date::parse("2016-05-06");
  for (int j = 0; j < n_tokens; ++j) {
    t.tokens.push_back({kWords[rng.below(kWords.size())], "", ""});
  }
  return t;
}

}  // namespace

TEST_CASE("score: zero model scores zero everywhere") {
  RecognizerModel model;
  Tweet t = make_tweet({"a", "b", "c"});
  TagSequence z = {tag("DOW=Mon"), TemporalTag::na(), tag("TL=past")};
  CHECK(score(model, t, z) == 0.0);
}

TEST_CASE("score: single bias weight") {
  RecognizerModel model;
  model.set_weight("BIAS|NA", 2.5);
  Tweet t = make_tweet({"hello"});
  CHECK(score(model, t, {TemporalTag::na()}) == doctest::Approx(2.5));
}

TEST_CASE("score throws on length mismatch") {
  RecognizerModel model;
  Tweet t = make_tweet({"a", "b"});
  CHECK_THROWS_AS(score(model, t, {TemporalTag::na()}), std::invalid_argument);
}

TEST_CASE("score matches brute-force feature materialization") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    Tweet t = random_tweet(rng, 1 + int(rng.below(5)));
    auto universe = full_universe();
    RecognizerModel model = random_model(t, universe, rng);
    TagSequence z;
    for (std::size_t j = 0; j < t.tokens.size(); ++j) {
      z.push_back(universe[rng.below(universe.size())]);
    }
    CHECK(score(model, t, z) ==
          doctest::Approx(oracles::materialized_score(model, t, z)).epsilon(1e-12));
  }
}

TEST_CASE("infer_free: zero model tie-breaks to tag id 0 (NA)") {
  RecognizerModel model;
  Tweet t = make_tweet({"a", "b", "c"});
  for (TemporalTag z : infer_free(model, t)) CHECK(z.id() == 0);
}

TEST_CASE("infer_free: dominant weight wins") {
  RecognizerModel model;
  model.set_weight("W=tomorrow|TL=future", 10.0);
  Tweet t = make_tweet({"see", "you", "tomorrow"});
  TagSequence z = infer_free(model, t);
  CHECK(z[2] == tag("TL=future"));
  CHECK(z[0].is_na());
  CHECK(z[1].is_na());
}

TEST_CASE("infer_free matches exhaustive per-token max on random models") {
  Rng rng(32);
  auto universe = full_universe();
  for (int trial = 0; trial < 20; ++trial) {
    Tweet t = random_tweet(rng, 1 + int(rng.below(5)));
    RecognizerModel model = random_model(t, universe, rng);
    TagSequence z = infer_free(model, t);
    for (std::size_t j = 0; j < t.tokens.size(); ++j) {
      Tweet single;
      single.id = "s";
      single.created_at = t.created_at;
      single.tokens = {t.tokens[j]};
      double got = score(model, single, {z[j]});
      for (TemporalTag cand : universe) {
        double other = score(model, single, {cand});
        CHECK(got >= other - 1e-12);
        // Ties must resolve toward the lowest id.
        if (other == got) CHECK(z[j].id() <= cand.id());
      }
    }
  }
}

TEST_CASE("infer_clamped: negative bag forces all NA") {
  Rng rng(33);
  Tweet t = random_tweet(rng, 4);
  RecognizerModel model = random_model(t, full_universe(), rng);
  for (TemporalTag z : infer_clamped(model, t, SentenceLabel{})) CHECK(z.is_na());
}

TEST_CASE("infer_clamped: single token covers the single label tag regardless of weights") {
  RecognizerModel model;
  model.set_weight("W=x|NA", 100.0);  // NA looks better, cover anyway
  Tweet t = make_tweet({"x"});
  auto z = infer_clamped(model, t, testutil::label_of({"DOW=Mon"}));
  REQUIRE(z.size() == 1);
  CHECK(z[0] == tag("DOW=Mon"));
}

TEST_CASE("infer_clamped throws when the label exceeds the token count") {
  RecognizerModel model;
  Tweet t = make_tweet({"only", "two"});
  auto label = testutil::label_of({"TL=future", "DOW=Mon", "DOM=9", "MOY=May"});
  CHECK_THROWS_AS(infer_clamped(model, t, label), InfeasibleBag);
}

TEST_CASE("infer_clamped covers every label tag and stays in the restricted domain") {
  Rng rng(34);
  auto universe = full_universe();
  for (int trial = 0; trial < 50; ++trial) {
    Tweet t = random_tweet(rng, 4 + int(rng.below(3)));
    RecognizerModel model = random_model(t, universe, rng);
    Date target = t.created_at.plus_days(rng.range(-7, 7));
    SentenceLabel label = derive_tags(target, t.created_at);
    TagSequence z = infer_clamped(model, t, label);
    for (TemporalTag lt : label.tags()) {
      CHECK(std::count(z.begin(), z.end(), lt) >= 1);
    }
    for (TemporalTag zt : z) {
      CHECK((zt.is_na() || label.contains(zt)));
    }
  }
}

TEST_CASE("free score dominates clamped score") {
  Rng rng(35);
  auto universe = full_universe();
  for (int trial = 0; trial < 50; ++trial) {
    Tweet t = random_tweet(rng, 4 + int(rng.below(3)));
    RecognizerModel model = random_model(t, universe, rng);
    SentenceLabel label = derive_tags(t.created_at.plus_days(rng.range(-7, 7)), t.created_at);
    double free_score = score(model, t, infer_free(model, t));
    double clamped_score = score(model, t, infer_clamped(model, t, label));
    CHECK(free_score >= clamped_score - 1e-12);
  }
}

TEST_CASE("greedy clamped inference tracks the exhaustive optimum") {
  Rng rng(36);
  int exact_hits = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    Tweet t = random_tweet(rng, 1 + int(rng.below(6)));
    SentenceLabel label;
    Date target = t.created_at.plus_days(rng.range(-7, 7));
    SentenceLabel full = derive_tags(target, t.created_at);
    for (TemporalTag lt : full.tags()) {
      if (label.size() < t.tokens.size() && rng.bernoulli(0.7)) label.set(lt);
    }
    RecognizerModel model = random_model(t, full_universe(), rng);
    double got = score(model, t, infer_clamped(model, t, label));
    double best = oracles::exhaustive_clamped_optimum(model, t, label);
    CHECK(got <= best + 1e-9);
    CHECK(got >= best - 0.05 * std::abs(best) - 1e-9);
    if (got >= best - 1e-9) ++exact_hits;
  }
  CHECK(exact_hits >= trials * 95 / 100);
}

TEST_CASE("training on negative bags alone is a fixed point of the zero model") {
  std::vector<Bag> bags;
  for (int i = 0; i < 5; ++i) {
    Bag bag;
    bag.tweet = make_tweet({"just", "plain", "words"}, "2016-05-06", "n" + std::to_string(i));
    bags.push_back(bag);
  }
  TrainConfig cfg;
  cfg.epochs = 3;
  RecognizerModel model = train(bags, cfg);
  CHECK(model.weights().empty());
}

TEST_CASE("single positive bag takes one perceptron step") {
  Bag bag;
  bag.tweet = make_tweet({"friday"}, "2016-05-06", "p");
  bag.target = Date::parse("2016-05-06");
  bag.label = testutil::label_of({"DOW=Fri"});
  bag.polarity = Polarity::Positive;

  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.learning_rate = 0.1;
  cfg.averaging = false;
  RecognizerModel model = train({bag}, cfg);

  // Clamped forces DOW=Fri onto the only token; free picks NA (tag id 0).
  for (const std::string& base : word_feature_templates(bag.tweet.tokens[0])) {
    CHECK(model.weight(base + "|DOW=Fri") == doctest::Approx(0.1));
    CHECK(model.weight(base + "|NA") == doctest::Approx(-0.1));
  }
}

TEST_CASE("separable synthetic data is learned by free inference") {
  SynthConfig scfg;
  scfg.n_tweets = 1500;
  scfg.n_events = 10;
  scfg.seed = 5;
  scfg.lexicon_noise = 0.0;
  auto synth = generate(scfg);
  auto bags = label_positives(synth.corpus, synth.events);
  auto negatives = sample_negatives(synth.corpus, synth.events, bags.size(), 5);
  bags.insert(bags.end(), negatives.begin(), negatives.end());

  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.seed = 5;
  RecognizerModel model = train(bags, cfg);

  // Count recovery of planted marker-word tags on the training corpus.
  ScoreCache cache(model);
  long long hit = 0, total = 0;
  for (std::size_t i = 0; i < synth.corpus.size(); ++i) {
    TagSequence pred = infer_free(cache, synth.corpus[i]);
    for (std::size_t j = 0; j < pred.size(); ++j) {
      if (synth.gold_tags[i][j].is_na()) continue;
      ++total;
      if (pred[j] == synth.gold_tags[i][j]) ++hit;
    }
  }
  REQUIRE(total > 0);
  CHECK(double(hit) / double(total) >= 0.99);
}

TEST_CASE("training is deterministic: byte-identical model files") {
  SynthConfig scfg;
  scfg.n_tweets = 300;
  scfg.n_events = 6;
  scfg.seed = 8;
  auto synth = generate(scfg);
  auto bags = label_positives(synth.corpus, synth.events);

  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.seed = 8;

  auto p1 = std::filesystem::temp_directory_path() / "temport_test_model1.tsv";
  auto p2 = std::filesystem::temp_directory_path() / "temport_test_model2.tsv";
  train(bags, cfg).save(p1);
  train(bags, cfg).save(p2);

  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  CHECK(!s1.empty());
}

TEST_CASE("infeasible bags are skipped and counted") {
  Bag good;
  good.tweet = make_tweet({"friday", "party", "time", "soon", "yes"}, "2016-05-06", "g");
  good.target = Date::parse("2016-05-09");
  good.label = derive_tags(*good.target, good.tweet.created_at);
  good.polarity = Polarity::Positive;

  Bag tiny = good;
  tiny.tweet = make_tweet({"friday"}, "2016-05-06", "b");  // 4 label tags, 1 token

  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.shuffle = false;
  TrainStats stats;
  train({good, tiny}, cfg, &stats);
  CHECK(stats.infeasible_skipped == 2);  // once per epoch
}

// --- exact log-likelihood oracles ---

namespace {

std::vector<TemporalTag> small_universe() {
  return {TemporalTag::na(), tag("TL=past"), tag("TL=future"), tag("DOW=Mon"),
          tag("DOM=9")};
}

Bag small_bag(Rng& rng, int n_tokens, const std::vector<TemporalTag>& universe,
              int n_label) {
  Bag bag;
  bag.tweet = random_tweet(rng, n_tokens);
  bag.polarity = n_label > 0 ? Polarity::Positive : Polarity::Negative;
  int added = 0;
  for (TemporalTag t : universe) {
    if (t.is_na() || added >= n_label) continue;
    if (!bag.label.of_type(t.type())) {
      bag.label.set(t);
      ++added;
    }
  }
  return bag;
}

}  // namespace

TEST_CASE("exact gradient is symmetric on a symmetric bag at zero weights") {
  RecognizerModel model;
  Bag bag;
  bag.tweet = make_tweet({"aa", "aa"});
  bag.label = testutil::label_of({"DOW=Mon"});
  auto universe = small_universe();
  auto grad = exact_loglik_gradient(model, bag, universe);
  REQUIRE(grad);
  // Both tokens are identical, so per-feature components collapse into the
  // same ids; TL=past and TL=future are symmetric under zero weights.
  CHECK(grad->get("W=aa|TL=past") == doctest::Approx(grad->get("W=aa|TL=future")));
  CHECK(grad->get("W=aa|DOW=Mon") > 0.0);  // clamped mass exceeds free mass
}

TEST_CASE("uncoverable label reports -inf likelihood") {
  RecognizerModel model;
  Bag bag;
  bag.tweet = make_tweet({"one"});
  bag.label = testutil::label_of({"DOW=Mon", "DOM=9"});
  auto universe = small_universe();
  CHECK(!exact_loglik(model, bag, universe));
  CHECK(!exact_loglik_gradient(model, bag, universe));
}

TEST_CASE("exact gradient matches central finite differences") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto universe = small_universe();
    Bag bag = small_bag(rng, 2 + int(rng.below(2)), universe, int(rng.below(3)));
    RecognizerModel model = random_model(bag.tweet, universe, rng);

    auto grad = exact_loglik_gradient(model, bag, universe);
    REQUIRE(grad);
    const double h = 1e-5;
    for (const auto& [feature, g] : grad->sorted_entries()) {
      double w0 = model.weight(feature);
      model.set_weight(feature, w0 + h);
      double up = *exact_loglik(model, bag, universe);
      model.set_weight(feature, w0 - h);
      double down = *exact_loglik(model, bag, universe);
      model.set_weight(feature, w0);
      double fd = (up - down) / (2.0 * h);
      CHECK(std::abs(fd - g) <= 1e-4 * std::max(1.0, std::abs(g)));
    }
  }
}

TEST_CASE("exact operations refuse oversized instances") {
  RecognizerModel model;
  Bag bag;
  bag.tweet = make_tweet({"a", "b", "c", "d", "e", "f", "g"});
  CHECK_THROWS_AS(exact_loglik(model, bag, small_universe()), std::invalid_argument);

  Bag ok;
  ok.tweet = make_tweet({"a"});
  std::vector<TemporalTag> big;
  for (int id = 0; id < 9; ++id) big.push_back(TemporalTag::from_id(id));
  CHECK_THROWS_AS(exact_loglik(model, ok, big), std::invalid_argument);
  std::vector<TemporalTag> no_na = {tag("TL=past"), tag("TL=future")};
  CHECK_THROWS_AS(exact_loglik(model, ok, no_na), std::invalid_argument);
}

TEST_CASE("model file round-trips through load and save") {
  RecognizerModel model;
  model.set_weight("W=friday|DOW=Fri", 1.25);
  model.set_weight("BIAS|NA", -0.5);
  model.metadata["note"] = "fixture";
  auto p = std::filesystem::temp_directory_path() / "temport_test_model_rt.tsv";
  model.save(p);
  RecognizerModel loaded = RecognizerModel::load(p);
  CHECK(loaded.component == "multit");
  CHECK(loaded.weight("W=friday|DOW=Fri") == 1.25);
  CHECK(loaded.weight("BIAS|NA") == -0.5);

  auto p2 = std::filesystem::temp_directory_path() / "temport_test_model_rt2.tsv";
  loaded.save(p2);
  std::ifstream f1(p, std::ios::binary), f2(p2, std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
}
