#include "oracles.hpp"

#include "opineq/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace opineq;
namespace fs = std::filesystem;

namespace {

ErrorCode parse_code(const std::string& text) {
  try {
    parse_matrix_file(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("opineq_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream b;
  b << in.rdbuf();
  return b.str();
}

}  // namespace

TEST_CASE("matrix file examples") {
  ComplexMatrix m = parse_matrix_file(R"({"rows":2,"cols":2,"entries":[1,0,0,1]})");
  CHECK(m == ComplexMatrix::Identity(2, 2));
  m = parse_matrix_file(R"({"rows":2,"cols":2,"entries":[[1,0],[0.5,0.5],0,0]})");
  CHECK(m(0, 0) == Complex(1, 0));
  CHECK(m(0, 1) == Complex(0.5, 0.5));
  CHECK(m(1, 1) == Complex(0, 0));
  m = parse_matrix_file(R"({"rows":1,"cols":3,"entries":[1,2,3]})");
  CHECK(m.rows() == 1);
  CHECK(m(0, 2) == Complex(3, 0));

  CHECK(parse_code(R"({"rows":2,"cols":2,"entries":[1,0,0]})") == ErrorCode::DimensionMismatch);
  CHECK(parse_code(R"({"rows":2,"cols":2,"entries":[1,0,0,1e999]})") == ErrorCode::NonFinite);
  CHECK(parse_code(R"({"rows":2,"cols":2,"entries":[1,0,0,[1]]})") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"rows":0,"cols":2,"entries":[]})") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"rows":2,"cols":2,"entries":[1,0,0,"x"]})") == ErrorCode::ParseError);
  CHECK(parse_code(R"([1,2])") == ErrorCode::ParseError);
}

TEST_CASE("parse errors report line and column") {
  try {
    parse_matrix_file("{\"rows\":2,\n\"cols\":2,\n  \"entries\": [1,0,,1]}");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("column") != std::string::npos);
  }
}

TEST_CASE("matrix serialization round trips losslessly") {
  oracle::Gen g(1);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix m = g.gaussian(g.integer(1, 5), g.integer(1, 5)) * std::pow(10.0, g.uniform(-20, 20));
    const std::string text = canonical_json(matrix_to_json(m));
    const ComplexMatrix back = parse_matrix_file(text);
    CHECK(back == m);
    CHECK(canonical_json(matrix_to_json(back)) == text);
  }
}

TEST_CASE("canonical json sorts keys and prints 17 digits") {
  const Json j = {{"b", 0.1}, {"a", {{"z", 1}, {"y", true}}}, {"c", "s\"q"}, {"d", nullptr}};
  CHECK(canonical_json(j) == R"({"a":{"y":true,"z":1},"b":0.10000000000000001,"c":"s\"q","d":null})");
  CHECK(canonical_json(real_to_json(std::numeric_limits<double>::infinity())) == "\"inf\"");
  CHECK(canonical_json(real_to_json(std::nan(""))) == "\"nan\"");
  CHECK(canonical_json(Json(-0.0)) == "0");
  for (double x : {-2.5e-300, 1.0 / 3.0, 6.02214076e23})
    CHECK(std::stod(canonical_json(Json(x))) == x);
}

TEST_CASE("run records round trip and save to distinct files") {
  RunRecord rec;
  rec.command = "classify";
  rec.arguments = {{"input", "x.json"}};
  rec.seed = 18446744073709551615ULL;
  rec.tolerances = {{"tol", 1e-8}};
  rec.result = {{"normal", {{"verdict", true}}}};

  const fs::path dir = fresh_dir("records");
  const fs::path first = write_report(rec, dir);
  const fs::path second = write_report(rec, dir);
  CHECK(first != second);
  CHECK(fs::exists(first));
  CHECK(fs::exists(second));
  CHECK(first.filename().string().find("-classify-18446744073709551615") != std::string::npos);
  CHECK(first.extension() == ".json");

  const RunRecord a = run_record_from_json(Json::parse(slurp(first)));
  const RunRecord b = run_record_from_json(Json::parse(slurp(second)));
  CHECK(a.command == rec.command);
  CHECK(a.seed == rec.seed);
  CHECK(a.arguments == rec.arguments);
  CHECK(a.result == rec.result);
  CHECK(a.tool_version == kToolVersion);
  CHECK(canonical_json(a.result) == canonical_json(b.result));
  CHECK(a.timestamp.size() == std::string("2026-01-02T03:04:05.123456Z").size());
  CHECK(a.timestamp.back() == 'Z');
  fs::remove_all(dir);
}

TEST_CASE("write_report into an unwritable location fails with IoError") {
  RunRecord rec;
  rec.command = "pinv";
  const fs::path file = fresh_dir("blocker");
  { std::ofstream(file) << "x"; }
  try {
    write_report(rec, file / "sub");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
  fs::remove(file);
}

TEST_CASE("result payload serializers cover the report types") {
  ClassificationReport cr;
  cr.selfadjoint_multiple.omega = Complex(1, 0);
  const Json c = to_json(cr);
  for (const char* key : {"normal", "selfadjoint_multiple", "unitary_multiple", "unitary_reflection_multiple",
                          "positive_semidefinite", "ep", "class_a", "paranormal", "tolerances_used"})
    CHECK(c.contains(key));
  CHECK(c["selfadjoint_multiple"]["omega"] == Json::array({1.0, 0.0}));
  CHECK(c["unitary_multiple"]["modulus"].is_null());

  VerificationReport vr;
  vr.theorem_id = "N3";
  const Json v = to_json(vr);
  for (const char* key : {"theorem_id", "ensemble", "trials", "violations", "worst_gap", "worst_case", "seed"})
    CHECK(v.contains(key));

  SearchResult sr;
  CHECK(to_json(sr)["status"] == "exhausted");
}
