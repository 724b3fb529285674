#include "opineq/cli.hpp"

#include "opineq/elementary.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace opineq {

namespace {

template <typename T>
T config_value(const Json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::ParseError, "config key '" + key + "' has the wrong type");
  }
}

void require_positive(long v, const char* what) {
  if (v < 1) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

void require_tolerance(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

struct Globals {
  std::optional<std::string> save;
  std::optional<std::string> config;
};

struct Outcome {
  int code = kExitOk;
  RunRecord record;
};

Json input_arguments(const std::string& path, const ComplexMatrix& s) {
  return {{"input", path}, {"input_matrix", matrix_to_json(s)}};
}

Budget make_budget(const CliConfig& c) {
  Budget b;
  b.restarts = c.restarts;
  b.iterations = c.iterations;
  b.stagnation_tol = c.stagnation_tol;
  require_budget(b);
  return b;
}

Outcome do_classify(const std::string& input, const CliConfig& c) {
  const ComplexMatrix s = read_matrix_file(input);
  require_tolerance(c.classify_tol, "tol");
  const Budget b = make_budget(c);
  const ClassificationReport rep = classify(s, c.classify_tol, b, c.seed);
  Outcome o;
  o.record.command = "classify";
  o.record.arguments = input_arguments(input, s);
  o.record.arguments["budget"] = to_json(b);
  o.record.seed = c.seed;
  o.record.tolerances = {{"tol", c.classify_tol}};
  o.record.result = to_json(rep);
  return o;
}

Json closed_form_check(const ComplexMatrix& s, MapKind map, const std::string& measure, double value,
                       double match_tol) {
  if (measure != "injective") return nullptr;
  double cf = 0;
  std::string source;
  if (map == MapKind::Psi) {
    cf = psi_injective_closed_form(s);
    source = "kappa_plus_inverse_kappa";
  } else {
    const double ns = operator_norm(s);
    if (self_commutator_norm(s) > kDefaultClassTol * ns * ns) return nullptr;
    cf = joint_ratio_functional(s);
    source = "eigenvalue_pair_ratio";
  }
  const double rel = std::abs(value - cf) / cf;
  return {{"value", cf}, {"source", source}, {"relative_error", rel}, {"match", rel <= match_tol},
          {"match_tol", match_tol}};
}

Outcome do_norms(const std::string& input, const std::string& map_name, const std::string& measure,
                 const CliConfig& c) {
  const ComplexMatrix s = read_matrix_file(input);
  require_square(s, "input matrix");
  const MapKind map = map_name == "phi" ? MapKind::Phi : MapKind::Psi;
  const Budget b = make_budget(c);
  const ElementaryOperator r = build_map(s, map);
  OptimizationResult est;
  if (measure == "sup")
    est = sup_norm_estimate(r, b, c.seed);
  else if (measure == "inf")
    est = inf_norm_estimate(r, b, c.seed);
  else
    est = injective_norm_estimate(r, b, c.seed);

  Outcome o;
  o.record.command = "norms";
  o.record.arguments = input_arguments(input, s);
  o.record.arguments["map"] = map_name;
  o.record.arguments["measure"] = measure;
  o.record.arguments["budget"] = to_json(b);
  o.record.seed = c.seed;
  o.record.tolerances = {{"stagnation_tol", c.stagnation_tol}, {"match_tol", c.match_tol},
                         {"method_agreement_tol", kMethodAgreementTol}};
  o.record.result = {{"map", map_name},
                     {"measure", measure},
                     {"dim", s.rows()},
                     {"value", real_to_json(est.value)},
                     {"estimate", to_json(est)},
                     {"closed_form", closed_form_check(s, map, measure, est.value, c.match_tol)}};
  const bool disagree = est.methods_agree.has_value() && !*est.methods_agree;
  o.code = (!est.converged || disagree) ? kExitNotConverged : kExitOk;
  return o;
}

Outcome do_verify(const std::string& theorem, const CliConfig& c) {
  require_positive(c.dim, "dim");
  require_positive(c.trials, "trials");
  require_tolerance(c.verify_tol, "tol");
  const VerificationReport rep = verify_theorem(theorem, c.dim, c.trials, c.seed, c.verify_tol);
  Outcome o;
  o.record.command = "verify";
  o.record.arguments = {{"theorem", theorem}, {"dim", c.dim}, {"trials", c.trials}};
  o.record.seed = c.seed;
  o.record.tolerances = {{"tol", c.verify_tol}};
  o.record.result = to_json(rep);
  o.record.result.erase("elapsed_seconds");
  o.record.timing = {{"elapsed_seconds", rep.elapsed_seconds}};
  o.code = rep.violations == 0 ? kExitOk : kExitViolations;
  return o;
}

Outcome do_search(const std::string& claim, const CliConfig& c) {
  require_positive(c.dim, "dim");
  const Budget b = make_budget(c);
  const SearchResult res = search_counterexample(claim, c.dim, b, c.seed);
  Outcome o;
  o.record.command = "search";
  o.record.arguments = {{"claim", claim}, {"dim", c.dim}, {"budget", to_json(b)}};
  o.record.seed = c.seed;
  o.record.tolerances = {{"stagnation_tol", c.stagnation_tol}};
  o.record.result = to_json(res);
  o.code = res.status == SearchStatus::Found ? kExitOk : kExitNotConverged;
  return o;
}

Outcome do_pinv(const std::string& input) {
  const ComplexMatrix s = read_matrix_file(input);
  const ComplexMatrix g = pseudo_inverse(s);
  Outcome o;
  o.record.command = "pinv";
  o.record.arguments = input_arguments(input, s);
  o.record.tolerances = {{"rank_rtol", default_rank_rtol(s)}};
  o.record.result = {{"pseudo_inverse", matrix_to_json(g)},
                     {"rank", numerical_rank(s)},
                     {"penrose_residuals", to_json(verify_penrose(s, g))}};
  return o;
}

}  // namespace

CliConfig parse_config(std::string_view bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  CliConfig c;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    if (k == "classify_tol")
      c.classify_tol = config_value<double>(v, k);
    else if (k == "verify_tol")
      c.verify_tol = config_value<double>(v, k);
    else if (k == "match_tol")
      c.match_tol = config_value<double>(v, k);
    else if (k == "seed")
      c.seed = config_value<std::uint64_t>(v, k);
    else if (k == "restarts")
      c.restarts = config_value<int>(v, k);
    else if (k == "iterations")
      c.iterations = config_value<int>(v, k);
    else if (k == "stagnation_tol")
      c.stagnation_tol = config_value<double>(v, k);
    else if (k == "dim")
      c.dim = config_value<Index>(v, k);
    else if (k == "trials")
      c.trials = config_value<int>(v, k);
    else
      throw Error(ErrorCode::ParseError, "unknown config key '" + k + "'");
  }
  return c;
}

CliConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Json to_json(const CliConfig& c) {
  return {{"classify_tol", c.classify_tol}, {"verify_tol", c.verify_tol}, {"match_tol", c.match_tol},
          {"seed", c.seed},                 {"restarts", c.restarts},     {"iterations", c.iterations},
          {"stagnation_tol", c.stagnation_tol}, {"dim", c.dim},         {"trials", c.trials}};
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator inequality toolkit", "opineq"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--save", g.save, "Directory for the run record");
  app.add_option("--config", g.config, "JSON file with default settings");

  std::string input;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> budget;
  std::optional<int> restarts;
  std::optional<Index> dim;
  std::optional<int> trials;
  std::string map_name;
  std::string measure;
  std::string theorem;
  std::string claim;

  auto* classify_cmd = app.add_subcommand("classify", "Class membership verdicts for a matrix");
  classify_cmd->add_option("--input", input, "Matrix JSON file")->required();
  classify_cmd->add_option("--tol", tol, "Relative tolerance");
  classify_cmd->add_option("--seed", seed, "Seed for the paranormal search");

  auto* norms_cmd = app.add_subcommand("norms", "Norm functionals of phi_S or psi_S");
  norms_cmd->add_option("--input", input, "Matrix JSON file")->required();
  norms_cmd->add_option("--map", map_name, "phi or psi")->required()->check(CLI::IsMember({"phi", "psi"}));
  norms_cmd->add_option("--measure", measure, "sup, inf or injective")
      ->required()
      ->check(CLI::IsMember({"sup", "inf", "injective"}));
  norms_cmd->add_option("--budget", budget, "Iterations per restart");
  norms_cmd->add_option("--restarts", restarts, "Number of restarts");
  norms_cmd->add_option("--seed", seed, "Seed");

  auto* verify_cmd = app.add_subcommand("verify", "Randomized check of a theorem");
  verify_cmd->add_option("--theorem", theorem, "Theorem id")->required();
  verify_cmd->add_option("--dim", dim, "Matrix dimension");
  verify_cmd->add_option("--trials", trials, "Number of trials");
  verify_cmd->add_option("--seed", seed, "Seed");
  verify_cmd->add_option("--tol", tol, "Relative violation tolerance");

  auto* search_cmd = app.add_subcommand("search", "Counterexample search for a claim");
  search_cmd->add_option("--claim", claim, "Claim id")->required();
  search_cmd->add_option("--dim", dim, "Matrix dimension");
  search_cmd->add_option("--budget", budget, "Iterations per restart");
  search_cmd->add_option("--seed", seed, "Seed");

  auto* pinv_cmd = app.add_subcommand("pinv", "Moore-Penrose inverse with residuals");
  pinv_cmd->add_option("--input", input, "Matrix JSON file")->required();

  for (auto* sub : {classify_cmd, norms_cmd, verify_cmd, search_cmd, pinv_cmd}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    CliConfig c;
    if (g.config) {
      c = load_config(*g.config);
    } else if (const char* env = std::getenv("OPINEQ_CONFIG"); env && *env) {
      c = load_config(env);
    }
    if (seed) c.seed = *seed;
    if (budget) c.iterations = *budget;
    if (restarts) c.restarts = *restarts;
    if (dim) c.dim = *dim;
    if (trials) c.trials = *trials;

    Outcome o;
    if (classify_cmd->parsed()) {
      if (tol) c.classify_tol = *tol;
      o = do_classify(input, c);
    } else if (norms_cmd->parsed()) {
      o = do_norms(input, map_name, measure, c);
    } else if (verify_cmd->parsed()) {
      if (tol) c.verify_tol = *tol;
      o = do_verify(theorem, c);
    } else if (search_cmd->parsed()) {
      o = do_search(claim, c);
    } else {
      o = do_pinv(input);
    }

    out << canonical_json(o.record.result) << '\n';
    if (g.save) {
      const auto path = write_report(o.record, *g.save);
      err << "saved " << path.string() << '\n';
    }
    if (o.code == kExitViolations) err << "violations found\n";
    if (o.code == kExitNotConverged) err << "optimizer did not converge or search exhausted\n";
    return o.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace opineq
