#include "temport/model_io.hpp"

#include <charconv>
#include <fstream>

#include "temport/error.hpp"

namespace temport {

std::string format_weight(double w) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, res.ptr);
}

void save_model_file(const std::filesystem::path& path, const std::string& component,
                     const nlohmann::json& metadata, const SparseVector& weights) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file " + path.string());
  out << "temport-model v1 " << component << '\n';
  out << metadata.dump() << '\n';
  for (const auto& [id, w] : weights.sorted_entries()) {
    out << id << '\t' << format_weight(w) << '\n';
  }
}

LoadedModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path.string());

  LoadedModel model;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty model file");
  const std::string magic = "temport-model v1 ";
  if (line.rfind(magic, 0) != 0 || line.size() <= magic.size()) {
    throw DataError(path.string() + ": bad model header '" + line + "'");
  }
  model.component = line.substr(magic.size());

  if (!std::getline(in, line)) throw DataError(path.string() + ": missing metadata line");
  try {
    model.metadata = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ":2: invalid metadata JSON: " + e.what());
  }

  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected feature-id<TAB>weight");
    }
    double w = 0.0;
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    auto res = std::from_chars(first, last, w);
    if (res.ec != std::errc() || res.ptr != last) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad weight");
    }
    model.weights.set(line.substr(0, tab), w);
  }
  return model;
}

}  // namespace temport
