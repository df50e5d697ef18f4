#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "pidkit/cli.hpp"
#include "pidkit/distribution_io.hpp"
#include "pidkit/gates.hpp"

using namespace pidkit;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kExpect = std::string(PIDKIT_SOURCE_DIR) + "/data/table2_expected.json";

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("atoms on the copy gate") {
  const auto r = run({"atoms", "--gate", "copy2", "--measure", "imin", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = json::parse(r.out);
  CHECK(j["atoms"].size() == 4);
  CHECK(j["atoms"][0]["antichain"] == "{1}{2}");
  CHECK(j["atoms"][0]["atom"].get<double>() == doctest::Approx(1.0));
  CHECK(j["consistency"]["ok"] == true);
  CHECK(j["digest"] == make_gate("copy2").digest());
}

TEST_CASE("atoms on the XOR-Source-Copy gate list 18 rows") {
  const auto r = run({"atoms", "--gate", "xor_source_copy", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  CHECK(json::parse(r.out)["atoms"].size() == 18);
  const auto text = run({"atoms", "--gate", "xor", "--measure", "isx"});
  CHECK(text.code == cli::kOk);
  CHECK(text.out.find("-0.584962500721") != std::string::npos);
}

TEST_CASE("atoms from a file and --emit") {
  const auto path = temp_file("pidkit_cli_in.json");
  const auto emitted = temp_file("pidkit_cli_emit.json");
  save_distribution(make_gate("and"), path);
  const auto r = run({"atoms", "--input", path.string(), "--emit", emitted.string()});
  CHECK(r.code == cli::kOk);
  CHECK(load_distribution(emitted) == make_gate("and"));
  std::filesystem::remove(path);
  std::filesystem::remove(emitted);
}

TEST_CASE("check reports TCR and ID failures for I_min") {
  const auto tcr = run({"check", "--gate", "xor_source_copy", "--measure", "imin", "--property", "tcr", "--format",
                        "json"});
  CHECK(tcr.code == cli::kOk);
  const auto j = json::parse(tcr.out);
  REQUIRE(j["reports"].size() == 1);
  CHECK(j["reports"][0]["verdict"] == "fail");
  CHECK(j["reports"][0].contains("witness"));

  const auto id = run({"check", "--gate", "copy2", "--measure", "imin", "--property", "id", "--format", "json"});
  CHECK(json::parse(id.out)["reports"][0]["verdict"] == "fail");

  const auto lp = run({"check", "--gate", "xor", "--measure", "imin", "--property", "lp"});
  CHECK(lp.code == cli::kOk);
  CHECK(lp.out.find("pass") != std::string::npos);
}

TEST_CASE("check with every property") {
  const auto r = run({"check", "--gate", "copy2", "--measure", "isx", "--trials", "4", "--format", "json"});
  CHECK(r.code == cli::kOk);
  CHECK(json::parse(r.out)["reports"].size() == 14);
}

TEST_CASE("check --expect flags unexpected verdicts") {
  const auto path = temp_file("pidkit_cli_expect.json");
  std::ofstream(path) << R"({"imin": {"TCR": "pass"}})";
  const auto r = run({"check", "--gate", "xor_source_copy", "--property", "tcr", "--expect", path.string()});
  CHECK(r.code == cli::kUnexpected);
  std::ofstream(path) << R"({"imin": {"TCR": "fail"}})";
  CHECK(run({"check", "--gate", "xor_source_copy", "--property", "tcr", "--expect", path.string()}).code ==
        cli::kOk);
  std::filesystem::remove(path);
}

TEST_CASE("theorem subcommand") {
  const auto r = run({"theorem", "--measure", "imin", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = json::parse(r.out);
  std::map<std::string, std::string> verdicts;
  for (const auto& rep : j["reports"]) verdicts[rep["property"]] = rep["verdict"];
  CHECK(verdicts["LP"] == "pass");
  CHECK(verdicts["REI"] == "pass");
  CHECK(verdicts["TCR"] == "fail");
  CHECK(verdicts["T2"] == "pass");
}

TEST_CASE("lattice subcommand") {
  const auto dot = run({"lattice", "--n", "2", "--format", "dot"});
  CHECK(dot.code == cli::kOk);
  CHECK(dot.out.find("digraph") != std::string::npos);
  const auto j = json::parse(run({"lattice", "--n", "3", "--format", "json"}).out);
  CHECK(j["nodes"].size() == 18);
  CHECK(run({"lattice", "--n", "5"}).code == cli::kCapacity);
  CHECK(run({"lattice", "--n", "0"}).code == cli::kInputError);
}

TEST_CASE("table2 against the expectations file") {
  const auto r = run({"table2", "--expect", kExpect});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("I_min") != std::string::npos);
  CHECK(r.out.find("I^sx") != std::string::npos);
  CHECK(r.out.find("not implemented") != std::string::npos);
}

TEST_CASE("gate subcommand") {
  const auto list = run({"gate", "--list"});
  CHECK(list.out.find("xor_source_copy") != std::string::npos);
  const auto g = run({"gate", "xor"});
  CHECK(g.code == cli::kOk);
  CHECK(parse_distribution(g.out) == make_gate("xor"));
}

TEST_CASE("input errors exit 2") {
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"atoms", "--gate", "nand"}).code == cli::kInputError);
  CHECK(run({"atoms", "--gate", "xor", "--measure", "broja"}).code == cli::kInputError);
  CHECK(run({"atoms", "--input", "/nonexistent.json"}).code == cli::kInputError);
  CHECK(run({"atoms", "--gate", "xor", "--input", "x.json"}).code == cli::kInputError);
  CHECK(run({"check", "--gate", "xor", "--tol", "-1"}).code == cli::kInputError);
  const auto bad = run({"atoms", "--gate", "nand"});
  CHECK(bad.err.find("unknown gate") != std::string::npos);
}
