#include "opineq/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace opineq {

namespace {

Error parse_error_at(std::string_view bytes, std::size_t byte, const std::string& what) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte, bytes.size());
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (bytes[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return Error(ErrorCode::ParseError,
               "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

Index dimension_field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  const Json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be a positive integer");
  return static_cast<Index>(v.get<std::int64_t>());
}

double entry_number(const Json& v, std::size_t k) {
  if (!v.is_number()) throw Error(ErrorCode::ParseError, "entry " + std::to_string(k) + " is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "entry " + std::to_string(k) + " is not finite");
  return x;
}

void write_canonical(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        write_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write_canonical(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      double x = j.get<double>();
      if (x == 0.0) x = 0.0;
      if (!std::isfinite(x)) {
        out += real_to_json(x).dump();
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

Json optional_real(const std::optional<double>& x) { return x ? real_to_json(*x) : Json(nullptr); }

}  // namespace

ComplexMatrix parse_matrix_file(std::string_view bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw parse_error_at(bytes, e.byte, e.what());
  } catch (const Json::out_of_range& e) {
    throw Error(ErrorCode::NonFinite, std::string("number out of range: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "matrix file must be a JSON object");
  const Index rows = dimension_field(doc, "rows");
  const Index cols = dimension_field(doc, "cols");
  if (!doc.contains("entries") || !doc.at("entries").is_array())
    throw Error(ErrorCode::ParseError, "field 'entries' must be an array");
  const Json& entries = doc.at("entries");
  if (entries.size() != static_cast<std::size_t>(rows * cols))
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(rows * cols) + " entries, got " +
                                                  std::to_string(entries.size()));
  ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Json& e = entries[k];
    Complex z;
    if (e.is_array()) {
      if (e.size() != 2) throw Error(ErrorCode::ParseError, "entry " + std::to_string(k) + " must be [re, im]");
      z = Complex(entry_number(e[0], k), entry_number(e[1], k));
    } else {
      z = Complex(entry_number(e, k), 0.0);
    }
    m(static_cast<Index>(k) / cols, static_cast<Index>(k) % cols) = z;
  }
  return m;
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_file(buf.str());
}

Json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json complex_to_json(Complex z) { return Json::array({real_to_json(z.real()), real_to_json(z.imag())}); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back(complex_to_json(m(i, j)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

std::string canonical_json(const Json& j) {
  std::string out;
  write_canonical(j, out);
  return out;
}

Json to_json(const Budget& b) {
  return {{"restarts", b.restarts},
          {"iterations", b.iterations},
          {"stagnation_tol", b.stagnation_tol},
          {"stop_below", optional_real(b.stop_below)}};
}

Json to_json(const ClassificationReport& r) {
  const auto& sa = r.selfadjoint_multiple;
  const auto& um = r.unitary_multiple;
  const auto& pn = r.paranormal;
  return {
      {"normal", {{"verdict", r.normal}, {"commutator_norm", real_to_json(r.commutator_norm)}}},
      {"selfadjoint_multiple",
       {{"verdict", sa.verdict},
        {"omega", sa.omega ? complex_to_json(*sa.omega) : Json(nullptr)},
        {"residual", real_to_json(sa.residual)}}},
      {"unitary_multiple",
       {{"verdict", um.verdict}, {"modulus", optional_real(um.modulus)}, {"residual", real_to_json(um.residual)}}},
      {"unitary_reflection_multiple", {{"verdict", r.unitary_reflection_multiple}}},
      {"positive_semidefinite",
       {{"verdict", r.positive_semidefinite},
        {"min_eigenvalue_hermitian_part", real_to_json(r.min_eigenvalue_hermitian_part)}}},
      {"ep", {{"verdict", r.ep}, {"projector_gap", real_to_json(r.ep_gap)}}},
      {"class_a", {{"verdict", r.class_a.verdict}, {"margin", real_to_json(r.class_a.margin)}}},
      {"paranormal",
       {{"verdict", std::string(to_string(pn.verdict))},
        {"worst_gap", real_to_json(pn.worst_gap)},
        {"witness", vector_to_json(pn.witness)},
        {"pencil_min", real_to_json(pn.pencil_min)},
        {"pencil_t", real_to_json(pn.pencil_t)},
        {"descent_says", pn.descent_says},
        {"pencil_says", pn.pencil_says}}},
      {"tolerances_used", {{"tol", r.tol}}},
  };
}

Json to_json(const OptimizationResult& r) {
  Json factors = nullptr;
  if (r.factors) factors = {{"x", vector_to_json(r.factors->first)}, {"h", vector_to_json(r.factors->second)}};
  return {{"value", real_to_json(r.value)},
          {"direction", std::string(to_string(r.direction))},
          {"certificate", matrix_to_json(r.certificate)},
          {"factors", factors},
          {"restarts_used", r.restarts_used},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"stagnation_tol", r.stagnation_tol},
          {"method", r.method},
          {"secondary_value", optional_real(r.secondary_value)},
          {"methods_agree", r.methods_agree ? Json(*r.methods_agree) : Json(nullptr)}};
}

Json to_json(const VerificationReport& r) {
  Json operands = Json::array();
  for (const auto& m : r.worst_case.operands) operands.push_back(matrix_to_json(m));
  return {{"theorem_id", r.theorem_id},
          {"ensemble", r.ensemble},
          {"dim", r.dim},
          {"trials", r.trials},
          {"violations", r.violations},
          {"tol", r.tol},
          {"worst_gap", real_to_json(r.worst_gap)},
          {"worst_relative_gap", real_to_json(r.worst_relative_gap)},
          {"worst_case",
           {{"operands", operands},
            {"x", matrix_to_json(r.worst_case.x)},
            {"alpha", optional_real(r.worst_case.alpha)}}},
          {"seed", r.seed},
          {"resamples", r.resamples},
          {"elapsed_seconds", r.elapsed_seconds}};
}

Json to_json(const SearchResult& r) {
  Json operands = Json::array();
  for (const auto& m : r.operands) operands.push_back(matrix_to_json(m));
  return {{"claim_id", r.claim_id},
          {"status", r.status == SearchStatus::Found ? "found" : "exhausted"},
          {"operands", operands},
          {"x", matrix_to_json(r.x)},
          {"gap", real_to_json(r.gap)},
          {"relative_gap", real_to_json(r.relative_gap)},
          {"inequality", r.inequality},
          {"note", r.note},
          {"candidates_tried", r.candidates_tried}};
}

Json to_json(const GapResult& r) {
  return {{"inequality_id", r.inequality_id},
          {"min_gap", real_to_json(r.min_gap)},
          {"certificate_x", matrix_to_json(r.certificate_x)},
          {"scale", real_to_json(r.scale)},
          {"operand_scale", real_to_json(r.operand_scale)},
          {"search_budget", to_json(r.search_budget)},
          {"restarts_used", r.restarts_used},
          {"iterations", r.iterations},
          {"converged", r.converged}};
}

Json to_json(const PenroseResiduals& r) {
  return {{"sgs_minus_s", real_to_json(r.sgs_minus_s)},
          {"gsg_minus_g", real_to_json(r.gsg_minus_g)},
          {"sg_hermitian", real_to_json(r.sg_hermitian)},
          {"gs_hermitian", real_to_json(r.gs_hermitian)},
          {"max", real_to_json(r.max())}};
}

Json to_json(const RunRecord& r) {
  return {{"command", r.command},     {"arguments", r.arguments}, {"seed", r.seed},
          {"tolerances", r.tolerances}, {"result", r.result},       {"timestamp", r.timestamp},
          {"tool_version", r.tool_version}, {"timing", r.timing}};
}

RunRecord run_record_from_json(const Json& j) {
  RunRecord r;
  try {
    r.command = j.at("command").get<std::string>();
    r.arguments = j.at("arguments");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tolerances = j.at("tolerances");
    r.result = j.at("result");
    r.timestamp = j.at("timestamp").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.timing = j.value("timing", Json::object());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("run record: ") + e.what());
  }
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch()).count() % 1000000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<long long>(micros));
  return buf;
}

std::filesystem::path write_report(RunRecord record, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (record.timestamp.empty()) record.timestamp = utc_timestamp();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());

  std::string stamp;
  for (char c : record.timestamp)
    if (c != ':' && c != '-') stamp += c;
  const std::string stem = stamp + "-" + record.command + "-" + std::to_string(record.seed);
  fs::path path = dir / (stem + ".json");
  for (int k = 1; fs::exists(path, ec); ++k) path = dir / (stem + "-" + std::to_string(k) + ".json");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << canonical_json(to_json(record)) << '\n';
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
  return path;
}

}  // namespace opineq
