#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "grf/app.hpp"

using namespace grf;
using grf::io::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = app::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kAffine =
    R"({"m":1,"k":1,"basis":[{"type":"monomial","exponents":[0],"amplitude":[1]},{"type":"monomial","exponents":[1],"amplitude":[1]}]})";
const std::string kEmpty = R"({"m":1,"k":1,"basis":[]})";
const std::string kSupBelow = R"({"type":"sup_norm_below","box":{"lower":[0],"upper":[1]},"order":0,"threshold":1})";

}  // namespace

TEST_CASE("counterexample report") {
  const auto a = run({"counterexample", "--n", "5", "--samples", "20000", "--seed", "0"});
  REQUIRE(a.code == 0);
  const json doc = json::parse(a.out);
  const json& row = doc["rows"][0];
  CHECK(row["n"] == 5);
  CHECK(row["exact_prob"].get<double>() == doctest::Approx(3.7779e-3).epsilon(1e-4));
  CHECK(row["ci_covers_exact"] == true);
  CHECK(row["ci95"][0].get<double>() <= row["exact_prob"].get<double>());
  const auto b = run({"counterexample", "--n", "5", "--samples", "20000", "--seed", "0", "--threads", "3"});
  CHECK(a.out == b.out);
}

TEST_CASE("jet-scan") {
  const auto ok = run({"jet-scan", "--field", kAffine, "--order", "1", "--require-pass"});
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["all_pass"] == true);
  const auto fail = run({"jet-scan", "--field", kAffine, "--order", "2", "--require-pass"});
  CHECK(fail.code == 2);
  CHECK(json::parse(fail.out)["all_pass"] == false);
  const auto report_only = run({"jet-scan", "--field", kAffine, "--order", "2"});
  CHECK(report_only.code == 0);
  const auto dot = run({"jet-scan", "--kernel", R"({"type":"closed_form","tag":"dot"})", "--order", "1", "--require-pass"});
  CHECK(dot.code == 2);
}

TEST_CASE("estimate") {
  const auto r = run({"estimate", "--field", kEmpty, "--event", kSupBelow, "--samples", "500"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["p_hat"] == 1.0);
  for (const char* key : {"event", "n", "p_hat", "stderr", "ci95", "seed", "field_digest"}) CHECK(doc.contains(key));
}

TEST_CASE("validate") {
  const auto ok = run({"validate", "--field", kAffine});
  CHECK(ok.code == 0);
  const json doc = json::parse(ok.out);
  CHECK(doc["psd"] == true);
  CHECK(doc["symmetric"] == true);
}

TEST_CASE("usage and schema errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"no-such-command"}).code == 1);
  CHECK(run({"estimate", "--field", kEmpty, "--event", kSupBelow, "--bogus"}).code == 1);
  CHECK(run({"estimate", "--field", kEmpty, "--event", kSupBelow, "--samples", "10"}).code == 1);
  const auto schema =
      run({"estimate", "--field", R"({"m":1,"k":1,"basis":[{"type":"bump","center":[0.5],"radius":-1,"amplitude":[1]}]})", "--event",
           kSupBelow});
  CHECK(schema.code == 1);
  CHECK(schema.err.find("/basis/0/radius") != std::string::npos);
  const auto unknown = run({"estimate", "--field", R"({"m":1,"k":1,"basis":[],"colour":1})", "--event", kSupBelow});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("/colour") != std::string::npos);
  CHECK(run({"estimate", "--field", "/nonexistent/field.json", "--event", kSupBelow}).code == 1);
}

TEST_CASE("help") {
  const auto top = run({"--help"});
  CHECK(top.code == 0);
  for (const char* cmd : {"sample", "covariance", "seminorm", "jet-scan", "estimate", "gauss-ratio", "limit-study",
                          "counterexample", "validate"}) {
    CHECK(top.out.find(cmd) != std::string::npos);
    const auto sub = run({cmd, "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.size() > 40);
  }
}

TEST_CASE("csv output") {
  const auto r = run({"counterexample", "--n", "2", "5", "--samples", "200", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  std::string header, line;
  std::getline(is, header);
  CHECK(header.find("exact_prob") != std::string::npos);
  CHECK(header.find(",n,") != std::string::npos);
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("output file is written whole") {
  const auto path = std::filesystem::temp_directory_path() / "grflab_cli_test.json";
  std::filesystem::remove(path);
  const auto r = run({"seminorm", "--field", kAffine, "--order", "1", "-o", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  const json doc = json::parse(f);
  CHECK(doc["seminorm"] == 2.0);
  std::filesystem::remove(path);
}

TEST_CASE("other subcommands") {
  const auto cov = run({"covariance", "--field", kAffine, "--p", "2", "--q", "3"});
  REQUIRE(cov.code == 0);
  CHECK(json::parse(cov.out)["matrix"][0][0] == 7.0);
  const auto smp = run({"sample", "--field", kAffine, "--resolution", "4", "--count", "2"});
  REQUIRE(smp.code == 0);
  CHECK(json::parse(smp.out)["rows"].size() == 10);
  const std::string harmonic = R"({"m":1,"k":1,"basis":[{"type":"harmonic","frequency":[2],"amplitude":[1]}]})";
  const auto gr = run({"gauss-ratio", "--field", harmonic, "--field", kAffine, "--order", "1", "--samples", "500"});
  REQUIRE(gr.code == 0);
  CHECK(json::parse(gr.out)["rows"].size() == 2);
  const std::string half =
      R"({"m":1,"k":1,"basis":[{"type":"monomial","exponents":[0],"amplitude":[1]},{"type":"monomial","exponents":[1],"amplitude":[0.5]}]})";
  const std::string one = R"({"m":1,"k":1,"basis":[{"type":"monomial","exponents":[0],"amplitude":[1]}]})";
  const auto ls = run({"limit-study", "--fields", kAffine, half, "--limit", one, "--event", kSupBelow, "--samples", "500"});
  REQUIRE(ls.code == 0);
  const json rows = json::parse(ls.out)["rows"];
  CHECK(rows.size() == 3);
  CHECK(rows[2]["kernel_distance"] == 0.0);
}
