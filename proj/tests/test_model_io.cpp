#include "temport/model_io.hpp"

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "temport/error.hpp"

using namespace temport;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("model file layout: header, metadata, sorted feature lines") {
  SparseVector w;
  w.set("Z=last", 1.0);
  w.set("A=first", -0.25);
  w.set("M=mid", 0.1);
  nlohmann::json meta;
  meta["seed"] = 7;
  auto p = std::filesystem::temp_directory_path() / "temport_test_io.tsv";
  save_model_file(p, "multit", meta, w);

  std::string content = slurp(p);
  CHECK(content ==
        "temport-model v1 multit\n"
        "{\"seed\":7}\n"
        "A=first\t-0.25\n"
        "M=mid\t0.1\n"
        "Z=last\t1\n");

  LoadedModel loaded = load_model_file(p);
  CHECK(loaded.component == "multit");
  CHECK(loaded.metadata["seed"] == 7);
  CHECK(loaded.weights.get("A=first") == -0.25);
  CHECK(loaded.weights.get("M=mid") == 0.1);
}

TEST_CASE("weights survive save-load exactly, including awkward doubles") {
  SparseVector w;
  w.set("a", 0.1);
  w.set("b", 1.0 / 3.0);
  w.set("c", 1e-17);
  w.set("d", -123456.789012345);
  auto p = std::filesystem::temp_directory_path() / "temport_test_io2.tsv";
  save_model_file(p, "normalizer", nlohmann::json::object(), w);
  LoadedModel loaded = load_model_file(p);
  CHECK(loaded.weights.get("a") == 0.1);
  CHECK(loaded.weights.get("b") == 1.0 / 3.0);
  CHECK(loaded.weights.get("c") == 1e-17);
  CHECK(loaded.weights.get("d") == -123456.789012345);
}

TEST_CASE("malformed model files are rejected") {
  auto p = std::filesystem::temp_directory_path() / "temport_test_io3.tsv";
  {
    std::ofstream out(p, std::ios::binary);
    out << "not a model\n{}\n";
  }
  CHECK_THROWS_AS(load_model_file(p), DataError);
  {
    std::ofstream out(p, std::ios::binary);
    out << "temport-model v1 multit\nnot json\n";
  }
  CHECK_THROWS_AS(load_model_file(p), DataError);
  {
    std::ofstream out(p, std::ios::binary);
    out << "temport-model v1 multit\n{}\nfeature-without-weight\n";
  }
  CHECK_THROWS_AS(load_model_file(p), DataError);
}
