// Command-line pipeline: event extraction, distant labeling, recognizer and
// normalizer training, tagging, date resolution, evaluation, threshold
// sweeps and synthetic corpus generation.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "temport/corpus.hpp"
#include "temport/distant_labels.hpp"
#include "temport/error.hpp"
#include "temport/evaluate.hpp"
#include "temport/events.hpp"
#include "temport/midat.hpp"
#include "temport/multit.hpp"
#include "temport/normalizer.hpp"
#include "temport/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace temport;

namespace {

constexpr const char* kVersion = "temport 0.1.0";

class Manifest {
 public:
  Manifest(std::string command, fs::path anchor_output)
      : command_(std::move(command)),
        anchor_(std::move(anchor_output)),
        start_(std::chrono::steady_clock::now()) {}

  void input(const std::string& key, const fs::path& path) { inputs_[key] = path.string(); }
  void output(const std::string& key, const fs::path& path) { outputs_[key] = path.string(); }
  template <class T>
  void option(const std::string& key, const T& value) {
    options_[key] = value;
  }

  void write() const {
    json j;
    j["command"] = command_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["options"] = options_;
    j["version"] = kVersion;
    auto elapsed = std::chrono::steady_clock::now() - start_;
    j["wall_time_sec"] = std::chrono::duration<double>(elapsed).count();
    fs::path path = anchor_;
    path += ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest " + path.string());
    out << j.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path anchor_;
  json inputs_ = json::object();
  json outputs_ = json::object();
  json options_ = json::object();
  std::chrono::steady_clock::time_point start_;
};

void write_json_report(const json& report, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write report " + path.string());
  out << report.dump(2) << '\n';
}

RecognizerModel load_recognizer(const fs::path& path) { return RecognizerModel::load(path); }

std::vector<double> parse_thresholds(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string piece = csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
    if (!piece.empty()) out.push_back(std::stod(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw DataError("no thresholds given");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] < out[i - 1]) throw DataError("thresholds must be non-decreasing");
  }
  return out;
}

std::set<int> parse_residues(const std::string& csv) {
  std::set<int> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string piece = csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
    if (!piece.empty()) out.insert(std::stoi(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

FeatureGroups parse_groups_flag(const std::string& csv) {
  if (csv == "all") return FeatureGroups::all();
  auto groups = FeatureGroups::parse(csv);
  if (!groups) throw DataError("unknown feature group in '" + csv + "'");
  return *groups;
}

std::vector<std::pair<double, double>> load_grid(const std::string& spec) {
  if (spec == "default") return default_grid();
  std::ifstream in(spec);
  if (!in) throw DataError("cannot open grid file " + spec);
  std::vector<std::pair<double, double>> grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double ap = 0.0, ar = 0.0;
    if (!(ss >> ap >> ar)) {
      throw DataError(spec + ":" + std::to_string(line_no) +
                      ": expected 'alpha_p alpha_r' per line");
    }
    grid.emplace_back(ap, ar);
  }
  if (grid.empty()) throw DataError("grid file " + spec + " has no points");
  return grid;
}

// --- subcommand bodies -----------------------------------------------------

int cmd_extract_events(const std::string& corpus_path, std::size_t top_k,
                       std::int64_t min_count, const std::string& out) {
  Manifest manifest("extract-events", out);
  manifest.input("corpus", corpus_path);
  manifest.output("out", out);
  manifest.option("top", top_k);
  manifest.option("min_count", min_count);

  auto corpus = load_corpus(corpus_path);
  auto events = extract_events(corpus, top_k, min_count);
  save_events(events, out);
  manifest.write();
  std::cerr << "extracted " << events.size() << " events from " << corpus.size()
            << " tweets\n";
  return 0;
}

int cmd_label(const std::string& corpus_path, const std::string& events_path, int window,
              double neg_ratio, std::uint64_t seed, const std::string& out) {
  Manifest manifest("label", out);
  manifest.input("corpus", corpus_path);
  manifest.input("events", events_path);
  manifest.output("out", out);
  manifest.option("window", window);
  manifest.option("neg_ratio", neg_ratio);
  manifest.option("seed", seed);

  auto corpus = load_corpus(corpus_path);
  auto events = load_events(events_path);
  auto bags = label_positives(corpus, events, window);
  const std::size_t n_negatives = std::size_t(double(bags.size()) * neg_ratio + 0.5);
  auto negatives = sample_negatives(corpus, events, n_negatives, seed);
  std::cerr << "labeled " << bags.size() << " positive and " << negatives.size()
            << " negative bags\n";
  bags.insert(bags.end(), negatives.begin(), negatives.end());
  save_bags(bags, out);
  manifest.write();
  return 0;
}

int cmd_train_recognizer(const std::string& bags_path, const std::string& model_kind,
                         double alpha_p, double alpha_r, const std::string& grid_spec,
                         const std::string& dev_bags_path, const TrainConfig& tcfg,
                         const std::string& out) {
  Manifest manifest("train-recognizer", out);
  manifest.input("bags", bags_path);
  manifest.output("out", out);
  manifest.option("model", model_kind);
  manifest.option("epochs", tcfg.epochs);
  manifest.option("learning_rate", tcfg.learning_rate);
  manifest.option("seed", tcfg.seed);
  manifest.option("shuffle", tcfg.shuffle);
  manifest.option("averaging", tcfg.averaging);

  auto bags = load_bags(bags_path);
  RecognizerModel model;
  TrainStats stats;
  if (model_kind == "multit") {
    model = train(bags, tcfg, &stats);
  } else if (model_kind == "midat") {
    MiDaTConfig cfg;
    cfg.alpha_p = alpha_p;
    cfg.alpha_r = alpha_r;
    if (!grid_spec.empty()) {
      if (dev_bags_path.empty()) {
        throw DataError("--grid requires --dev-bags for the dev-set objective");
      }
      manifest.input("dev_bags", dev_bags_path);
      manifest.option("grid", grid_spec);
      auto dev_bags = load_bags(dev_bags_path);
      cfg = grid_search(bags, dev_bags, load_grid(grid_spec), tcfg);
      std::cerr << "grid search picked alpha_p=" << cfg.alpha_p
                << " alpha_r=" << cfg.alpha_r << "\n";
    }
    manifest.option("alpha_p", cfg.alpha_p);
    manifest.option("alpha_r", cfg.alpha_r);
    model = train_midat(bags, cfg, tcfg, &stats);
  } else {
    throw DataError("unknown model kind '" + model_kind + "' (expected multit or midat)");
  }
  if (stats.infeasible_skipped > 0) {
    std::cerr << "skipped " << stats.infeasible_skipped << " infeasible bag visits\n";
  }
  model.save(out);
  manifest.write();
  return 0;
}

int cmd_train_normalizer(const std::string& bags_path, const std::string& recognizer_path,
                         const std::string& groups_csv, const TrainConfig& tcfg, double l2,
                         double threshold, const std::string& out) {
  Manifest manifest("train-normalizer", out);
  manifest.input("bags", bags_path);
  manifest.input("recognizer", recognizer_path);
  manifest.output("out", out);
  manifest.option("groups", groups_csv);
  manifest.option("epochs", tcfg.epochs);
  manifest.option("learning_rate", tcfg.learning_rate);
  manifest.option("l2", l2);
  manifest.option("threshold", threshold);
  manifest.option("seed", tcfg.seed);

  auto bags = load_bags(bags_path);
  auto recognizer = load_recognizer(recognizer_path);
  NormalizerModel model =
      train_normalizer(bags, recognizer, parse_groups_flag(groups_csv), tcfg, l2, threshold);
  model.save(out);
  manifest.write();
  return 0;
}

int cmd_tag(const std::string& corpus_path, const std::string& recognizer_path,
            const std::string& out) {
  Manifest manifest("tag", out);
  manifest.input("corpus", corpus_path);
  manifest.input("recognizer", recognizer_path);
  manifest.output("out", out);

  auto corpus = load_corpus(corpus_path);
  auto recognizer = load_recognizer(recognizer_path);
  ScoreCache cache(recognizer);
  std::vector<std::pair<std::string, TagSequence>> tags;
  tags.reserve(corpus.size());
  for (const Tweet& tweet : corpus) {
    tags.emplace_back(tweet.id, infer_free(cache, tweet));
  }
  save_gold_tags(tags, out);
  manifest.write();
  return 0;
}

int cmd_resolve(const std::string& corpus_path, const std::string& recognizer_path,
                const std::string& normalizer_path, std::optional<double> threshold,
                bool use_external, bool explain, const std::string& out) {
  Manifest manifest("resolve", out);
  manifest.input("corpus", corpus_path);
  manifest.input("recognizer", recognizer_path);
  manifest.input("normalizer", normalizer_path);
  manifest.output("out", out);
  manifest.option("use_external", use_external);
  manifest.option("explain", explain);

  auto corpus = load_corpus(corpus_path);
  auto recognizer = load_recognizer(recognizer_path);
  auto normalizer = NormalizerModel::load(normalizer_path);
  if (threshold) normalizer.threshold = *threshold;
  manifest.option("threshold", normalizer.threshold);

  Resolver resolver(recognizer, normalizer);
  std::vector<ResolutionRecord> records;
  records.reserve(corpus.size());
  static const std::vector<Date> kNoExternals;
  for (const Tweet& tweet : corpus) {
    ResolutionRecord rec;
    rec.id = tweet.id;
    TagSequence extracted = resolver.tag(tweet);
    const std::vector<Date>& externals = use_external ? tweet.external_dates : kNoExternals;
    rec.res = resolver.resolve(tweet, extracted, externals);
    if (explain && !rec.res.is_null()) {
      Date top = rec.res.dates.front().date;
      bool is_window = std::abs(top - tweet.created_at) <= 10;
      Candidate cand = is_window ? Candidate::at(top) : Candidate::from_external(top);
      rec.top_features = resolver.fired_features(tweet, extracted, cand);
    }
    records.push_back(std::move(rec));
  }
  save_resolutions(records, out);
  manifest.write();
  return 0;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& mode, const std::string& out) {
  Manifest manifest("eval", out);
  manifest.input("gold", gold_path);
  manifest.input("pred", pred_path);
  manifest.output("out", out);
  manifest.option("mode", mode);

  json report;
  if (mode == "tags") {
    report = tags_eval_report(load_gold_tags(gold_path), load_gold_tags(pred_path));
  } else if (mode == "dates") {
    auto corpus = load_corpus(gold_path);
    std::vector<std::pair<std::string, std::vector<Date>>> gold;
    std::set<std::string> corpus_ids;
    for (const Tweet& tweet : corpus) {
      corpus_ids.insert(tweet.id);
      if (tweet.gold_dates) gold.emplace_back(tweet.id, *tweet.gold_dates);
    }
    std::set<std::string> gold_ids;
    for (const auto& [id, dates] : gold) gold_ids.insert(id);

    auto all_preds = load_resolutions(pred_path);
    std::vector<ResolutionRecord> preds;
    std::size_t unannotated = 0;
    for (auto& rec : all_preds) {
      if (gold_ids.count(rec.id)) {
        preds.push_back(std::move(rec));
      } else if (corpus_ids.count(rec.id)) {
        ++unannotated;  // prediction for a tweet without gold annotation
      } else {
        throw DataError("prediction for unknown tweet id '" + rec.id + "'");
      }
    }
    if (unannotated > 0) {
      std::cerr << "ignoring " << unannotated << " predictions without gold annotations\n";
    }
    report = date_eval_report(gold, preds);
  } else {
    throw DataError("unknown eval mode '" + mode + "' (expected tags or dates)");
  }
  write_json_report(report, out);
  manifest.write();
  std::cerr << "precision=" << report["precision"] << " recall=" << report["recall"]
            << " f1=" << report["f1"] << "\n";
  return 0;
}

int cmd_synth(const std::string& config_path, const std::string& out_prefix) {
  Manifest manifest("synth", out_prefix);
  manifest.input("config", config_path);

  std::ifstream in(config_path);
  if (!in) throw DataError("cannot open synth config " + config_path);
  json cj;
  try {
    cj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(config_path + ": invalid JSON: " + e.what());
  }
  SynthConfig cfg;
  if (cj.contains("n_tweets")) cfg.n_tweets = cj["n_tweets"].get<int>();
  if (cj.contains("n_events")) cfg.n_events = cj["n_events"].get<int>();
  if (cj.contains("seed")) cfg.seed = cj["seed"].get<std::uint64_t>();
  if (cj.contains("mention_dropout")) cfg.mention_dropout = cj["mention_dropout"].get<double>();
  if (cj.contains("lexicon_noise")) cfg.lexicon_noise = cj["lexicon_noise"].get<double>();
  if (cj.contains("date_start")) cfg.range_start = Date::parse(cj["date_start"].get<std::string>());
  if (cj.contains("date_end")) cfg.range_end = Date::parse(cj["date_end"].get<std::string>());
  manifest.option("config_echo", cj);
  manifest.option("seed", cfg.seed);

  SynthOutput out = generate(cfg);
  const fs::path corpus_path = out_prefix + ".corpus.jsonl";
  const fs::path tags_path = out_prefix + ".gold_tags.txt";
  const fs::path events_path = out_prefix + ".events.tsv";
  save_corpus(out.corpus, corpus_path);
  std::vector<std::pair<std::string, TagSequence>> tags;
  for (std::size_t i = 0; i < out.corpus.size(); ++i) {
    tags.emplace_back(out.corpus[i].id, out.gold_tags[i]);
  }
  save_gold_tags(tags, tags_path);
  save_events(out.events, events_path);
  manifest.output("corpus", corpus_path);
  manifest.output("gold_tags", tags_path);
  manifest.output("events", events_path);
  manifest.write();
  std::cerr << "wrote " << out.corpus.size() << " tweets, " << out.events.size()
            << " events\n";
  return 0;
}

int cmd_sweep(const std::string& corpus_path, const std::string& recognizer_path,
              const std::string& normalizer_path, const std::string& thresholds_csv,
              bool use_external, const std::string& out) {
  Manifest manifest("sweep", out);
  manifest.input("corpus", corpus_path);
  manifest.input("recognizer", recognizer_path);
  manifest.input("normalizer", normalizer_path);
  manifest.output("out", out);
  manifest.option("thresholds", thresholds_csv);
  manifest.option("use_external", use_external);

  auto corpus = load_corpus(corpus_path);
  auto recognizer = load_recognizer(recognizer_path);
  auto normalizer = NormalizerModel::load(normalizer_path);
  auto rows = sweep(recognizer, normalizer, corpus, parse_thresholds(thresholds_csv),
                    use_external);
  write_json_report(sweep_report(rows), out);
  manifest.write();
  return 0;
}

int cmd_split(const std::string& corpus_path, const std::string& epoch_spec,
              const std::string& train_csv, const std::string& dev_csv,
              const std::string& test_csv, const std::string& out_prefix) {
  Manifest manifest("split", out_prefix);
  manifest.input("corpus", corpus_path);

  auto corpus = load_corpus(corpus_path);
  Date epoch = epoch_spec == "auto" ? default_epoch(corpus) : Date::parse(epoch_spec);
  SplitAssignment sa;
  sa.train_residues = parse_residues(train_csv);
  sa.dev_residues = parse_residues(dev_csv);
  sa.test_residues = parse_residues(test_csv);
  auto split = split_corpus(corpus, sa, epoch);

  const fs::path train_path = out_prefix + ".train.jsonl";
  const fs::path dev_path = out_prefix + ".dev.jsonl";
  const fs::path test_path = out_prefix + ".test.jsonl";
  save_corpus(split.train, train_path);
  save_corpus(split.dev, dev_path);
  save_corpus(split.test, test_path);
  manifest.output("train", train_path);
  manifest.output("dev", dev_path);
  manifest.output("test", test_path);
  manifest.option("epoch", epoch.str());
  manifest.option("train_residues", train_csv);
  manifest.option("dev_residues", dev_csv);
  manifest.option("test_residues", test_csv);
  manifest.write();
  std::cerr << "split " << corpus.size() << " tweets into " << split.train.size() << "/"
            << split.dev.size() << "/" << split.test.size() << " (train/dev/test), epoch "
            << epoch.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal expression recognition and date normalization pipeline"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // extract-events
  std::string ee_corpus, ee_out;
  std::size_t ee_top = 10000;
  std::int64_t ee_min_count = 3;
  auto* ee = app.add_subcommand("extract-events", "mine (entity, date) events by G2 score");
  ee->add_option("--corpus", ee_corpus)->required();
  ee->add_option("--top", ee_top, "keep the k best events");
  ee->add_option("--min-count", ee_min_count, "minimum co-occurrence count");
  ee->add_option("--out", ee_out)->required();

  // label
  std::string lb_corpus, lb_events, lb_out;
  int lb_window = 7;
  double lb_neg_ratio = 1.0;
  std::uint64_t lb_seed = 1;
  auto* lb = app.add_subcommand("label", "build distant-supervision bags from events");
  lb->add_option("--corpus", lb_corpus)->required();
  lb->add_option("--events", lb_events)->required();
  lb->add_option("--window", lb_window, "days around the event date (inclusive)");
  lb->add_option("--neg-ratio", lb_neg_ratio, "negatives per positive bag");
  lb->add_option("--seed", lb_seed);
  lb->add_option("--out", lb_out)->required();

  // train-recognizer
  std::string tr_bags, tr_model = "multit", tr_grid, tr_dev_bags, tr_out;
  double tr_alpha_p = -25.0, tr_alpha_r = 500.0;
  TrainConfig tr_cfg;
  bool tr_no_shuffle = false, tr_no_averaging = false;
  auto* tr = app.add_subcommand("train-recognizer", "train the word-level temporal tagger");
  tr->add_option("--bags", tr_bags)->required();
  tr->add_option("--model", tr_model, "multit or midat")
      ->check(CLI::IsMember({"multit", "midat"}));
  tr->add_option("--alpha-p", tr_alpha_p, "penalty (midat)");
  tr->add_option("--alpha-r", tr_alpha_r, "reward (midat)");
  tr->add_option("--grid", tr_grid, "grid file or 'default' (midat)");
  tr->add_option("--dev-bags", tr_dev_bags, "dev bags for the grid objective");
  tr->add_option("--epochs", tr_cfg.epochs);
  tr->add_option("--lr", tr_cfg.learning_rate);
  tr->add_option("--seed", tr_cfg.seed);
  tr->add_flag("--no-shuffle", tr_no_shuffle);
  tr->add_flag("--no-averaging", tr_no_averaging);
  tr->add_option("--out", tr_out)->required();

  // train-normalizer
  std::string tn_bags, tn_recognizer, tn_groups = "all", tn_out;
  TrainConfig tn_cfg;
  double tn_l2 = 1e-4, tn_threshold = 0.5;
  bool tn_no_shuffle = false;
  auto* tn = app.add_subcommand("train-normalizer", "train the date normalizer");
  tn->add_option("--bags", tn_bags)->required();
  tn->add_option("--recognizer", tn_recognizer)->required();
  tn->add_option("--groups", tn_groups, "'all' or comma list of feature groups");
  tn->add_option("--epochs", tn_cfg.epochs);
  tn->add_option("--lr", tn_cfg.learning_rate);
  tn->add_option("--l2", tn_l2);
  tn->add_option("--threshold", tn_threshold);
  tn->add_option("--seed", tn_cfg.seed);
  tn->add_flag("--no-shuffle", tn_no_shuffle);
  tn->add_option("--out", tn_out)->required();

  // tag
  std::string tg_corpus, tg_recognizer, tg_out;
  auto* tg = app.add_subcommand("tag", "tag a corpus with the recognizer");
  tg->add_option("--corpus", tg_corpus)->required();
  tg->add_option("--recognizer", tg_recognizer)->required();
  tg->add_option("--out", tg_out)->required();

  // resolve
  std::string rs_corpus, rs_recognizer, rs_normalizer, rs_out;
  double rs_threshold = -1.0;
  bool rs_use_external = false, rs_explain = false;
  auto* rs = app.add_subcommand("resolve", "resolve dates for a corpus");
  rs->add_option("--corpus", rs_corpus)->required();
  rs->add_option("--recognizer", rs_recognizer)->required();
  rs->add_option("--normalizer", rs_normalizer)->required();
  rs->add_option("--threshold", rs_threshold, "override the model threshold");
  rs->add_flag("--use-external", rs_use_external,
               "re-score each tweet's external resolver dates as extra candidates");
  rs->add_flag("--explain", rs_explain, "record fired features for the top candidate");
  rs->add_option("--out", rs_out)->required();

  // eval
  std::string ev_gold, ev_pred, ev_mode, ev_out;
  auto* ev = app.add_subcommand("eval", "score predictions against gold");
  ev->add_option("--gold", ev_gold)->required();
  ev->add_option("--pred", ev_pred)->required();
  ev->add_option("--mode", ev_mode)->required()->check(CLI::IsMember({"tags", "dates"}));
  ev->add_option("--out", ev_out)->required();

  // synth
  std::string sy_config, sy_prefix;
  auto* sy = app.add_subcommand("synth", "generate a synthetic corpus with gold labels");
  sy->add_option("--config", sy_config)->required();
  sy->add_option("--out-prefix", sy_prefix)->required();

  // sweep
  std::string sw_corpus, sw_recognizer, sw_normalizer, sw_out;
  std::string sw_thresholds = "0.0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95,1.0";
  bool sw_use_external = false;
  auto* sw = app.add_subcommand("sweep", "precision/recall over a threshold sweep");
  sw->add_option("--corpus", sw_corpus)->required();
  sw->add_option("--recognizer", sw_recognizer)->required();
  sw->add_option("--normalizer", sw_normalizer)->required();
  sw->add_option("--thresholds", sw_thresholds, "comma list, non-decreasing");
  sw->add_flag("--use-external", sw_use_external);
  sw->add_option("--out", sw_out)->required();

  // split
  std::string sp_corpus, sp_epoch = "auto", sp_prefix;
  std::string sp_train = "0,1,2", sp_dev = "4", sp_test = "3";
  auto* sp = app.add_subcommand("split", "partition a corpus by mod-5 week residue");
  sp->add_option("--corpus", sp_corpus)->required();
  sp->add_option("--epoch", sp_epoch, "'auto' (Monday before earliest tweet) or a date");
  sp->add_option("--train", sp_train, "train residues");
  sp->add_option("--dev", sp_dev, "dev residues");
  sp->add_option("--test", sp_test, "test residues");
  sp->add_option("--out-prefix", sp_prefix)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*ee) return cmd_extract_events(ee_corpus, ee_top, ee_min_count, ee_out);
    if (*lb) return cmd_label(lb_corpus, lb_events, lb_window, lb_neg_ratio, lb_seed, lb_out);
    if (*tr) {
      tr_cfg.shuffle = !tr_no_shuffle;
      tr_cfg.averaging = !tr_no_averaging;
      return cmd_train_recognizer(tr_bags, tr_model, tr_alpha_p, tr_alpha_r, tr_grid,
                                  tr_dev_bags, tr_cfg, tr_out);
    }
    if (*tn) {
      tn_cfg.shuffle = !tn_no_shuffle;
      return cmd_train_normalizer(tn_bags, tn_recognizer, tn_groups, tn_cfg, tn_l2,
                                  tn_threshold, tn_out);
    }
    if (*tg) return cmd_tag(tg_corpus, tg_recognizer, tg_out);
    if (*rs) {
      std::optional<double> threshold;
      if (rs_threshold >= 0.0) threshold = rs_threshold;
      return cmd_resolve(rs_corpus, rs_recognizer, rs_normalizer, threshold, rs_use_external,
                         rs_explain, rs_out);
    }
    if (*ev) return cmd_eval(ev_gold, ev_pred, ev_mode, ev_out);
    if (*sy) return cmd_synth(sy_config, sy_prefix);
    if (*sw) return cmd_sweep(sw_corpus, sw_recognizer, sw_normalizer, sw_thresholds,
                              sw_use_external, sw_out);
    if (*sp) return cmd_split(sp_corpus, sp_epoch, sp_train, sp_dev, sp_test, sp_prefix);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
