#include "temport/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "temport/error.hpp"

namespace temport {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw DataError(context + ": " + what);
}

bool has_whitespace(const std::string& s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return true;
  }
  return false;
}

Date parse_date_field(const json& j, const char* field, const std::string& context) {
  if (!j.is_string()) fail(context, std::string("field '") + field + "' must be a string date");
  auto d = Date::try_parse(j.get_ref<const std::string&>());
  if (!d) fail(context, std::string("field '") + field + "' is not a valid YYYY-MM-DD date");
  return *d;
}

Tweet parse_tweet(const json& j, const std::string& context) {
  if (!j.is_object()) fail(context, "record is not a JSON object");
  Tweet t;

  auto id_it = j.find("id");
  if (id_it == j.end() || !id_it->is_string() || id_it->get_ref<const std::string&>().empty()) {
    fail(context, "missing or empty field 'id'");
  }
  t.id = id_it->get<std::string>();

  auto created_it = j.find("created_at");
  if (created_it == j.end()) fail(context, "missing field 'created_at'");
  t.created_at = parse_date_field(*created_it, "created_at", context);

  auto tok_it = j.find("tokens");
  if (tok_it == j.end() || !tok_it->is_array() || tok_it->empty()) {
    fail(context, "field 'tokens' must be a non-empty array");
  }
  for (const auto& tj : *tok_it) {
    if (!tj.is_object()) fail(context, "field 'tokens' entries must be objects");
    Token tok;
    auto text_it = tj.find("text");
    if (text_it == tj.end() || !text_it->is_string() ||
        text_it->get_ref<const std::string&>().empty()) {
      fail(context, "token field 'text' missing or empty");
    }
    tok.text = text_it->get<std::string>();
    if (has_whitespace(tok.text)) fail(context, "token field 'text' contains whitespace");
    if (auto it = tj.find("pos"); it != tj.end() && it->is_string()) tok.pos = it->get<std::string>();
    if (auto it = tj.find("ne"); it != tj.end() && it->is_string()) tok.ne = it->get<std::string>();
    t.tokens.push_back(std::move(tok));
  }

  if (auto it = j.find("external_dates"); it != j.end()) {
    if (!it->is_array()) fail(context, "field 'external_dates' must be an array");
    for (const auto& dj : *it) {
      t.external_dates.push_back(parse_date_field(dj, "external_dates", context));
    }
  }

  if (auto it = j.find("gold_dates"); it != j.end()) {
    if (!it->is_array()) fail(context, "field 'gold_dates' must be an array");
    // The literal string "null" as the sole element marks an explicit
    // no-date gold label.
    if (it->size() == 1 && (*it)[0].is_string() &&
        (*it)[0].get_ref<const std::string&>() == "null") {
      t.gold_dates = std::vector<Date>{};
    } else {
      std::vector<Date> dates;
      for (const auto& dj : *it) {
        dates.push_back(parse_date_field(dj, "gold_dates", context));
      }
      t.gold_dates = std::move(dates);
    }
  }

  return t;
}

}  // namespace

Tweet tweet_from_json_line(const std::string& line, const std::string& context) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(context, std::string("invalid JSON: ") + e.what());
  }
  return parse_tweet(j, context);
}

std::vector<Tweet> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());

  std::vector<Tweet> corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string context = path.string() + ":" + std::to_string(line_no);
    Tweet t = tweet_from_json_line(line, context);
    if (!seen_ids.insert(t.id).second) {
      fail(context, "duplicate tweet id '" + t.id + "'");
    }
    corpus.push_back(std::move(t));
  }
  return corpus;
}

std::string tweet_to_json_line(const Tweet& tweet) {
  json j;
  j["id"] = tweet.id;
  j["created_at"] = tweet.created_at.str();
  json toks = json::array();
  for (const Token& tok : tweet.tokens) {
    json tj;
    tj["text"] = tok.text;
    if (!tok.pos.empty()) tj["pos"] = tok.pos;
    if (!tok.ne.empty()) tj["ne"] = tok.ne;
    toks.push_back(std::move(tj));
  }
  j["tokens"] = std::move(toks);
  if (!tweet.external_dates.empty()) {
    json arr = json::array();
    for (Date d : tweet.external_dates) arr.push_back(d.str());
    j["external_dates"] = std::move(arr);
  }
  if (tweet.gold_dates) {
    json arr = json::array();
    if (tweet.gold_dates->empty()) {
      arr.push_back("null");
    } else {
      for (Date d : *tweet.gold_dates) arr.push_back(d.str());
    }
    j["gold_dates"] = std::move(arr);
  }
  return j.dump();
}

void save_corpus(const std::vector<Tweet>& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file " + path.string());
  for (const Tweet& t : corpus) out << tweet_to_json_line(t) << '\n';
}

bool SplitAssignment::valid() const {
  auto in_range = [](const std::set<int>& s) {
    for (int r : s) {
      if (r < 0 || r > 4) return false;
    }
    return true;
  };
  if (!in_range(train_residues) || !in_range(dev_residues) || !in_range(test_residues)) {
    return false;
  }
  for (int r : train_residues) {
    if (dev_residues.count(r) || test_residues.count(r)) return false;
  }
  for (int r : dev_residues) {
    if (test_residues.count(r)) return false;
  }
  return true;
}

int week_residue(Date d, Date epoch) {
  int diff = d - epoch;
  int week = diff / 7;
  if (diff % 7 != 0 && diff < 0) --week;
  return ((week % 5) + 5) % 5;
}

SplitResult split_corpus(const std::vector<Tweet>& corpus, const SplitAssignment& sa,
                         Date epoch) {
  if (!sa.valid()) throw DataError("split residue sets must be disjoint subsets of {0..4}");
  SplitResult out;
  for (const Tweet& t : corpus) {
    int r = week_residue(t.created_at, epoch);
    if (sa.train_residues.count(r)) {
      out.train.push_back(t);
    } else if (sa.dev_residues.count(r)) {
      out.dev.push_back(t);
    } else if (sa.test_residues.count(r)) {
      out.test.push_back(t);
    }
  }
  return out;
}

Date default_epoch(const std::vector<Tweet>& corpus) {
  if (corpus.empty()) return Date::from_ymd(1970, 1, 5);  // a Monday
  Date earliest = corpus.front().created_at;
  for (const Tweet& t : corpus) {
    if (t.created_at < earliest) earliest = t.created_at;
  }
  return earliest.monday_of_week();
}

}  // namespace temport
