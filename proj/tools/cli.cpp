#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "tensornorm/baseline_pm.hpp"
#include "tensornorm/error.hpp"
#include "tensornorm/hgpm.hpp"
#include "tensornorm/oracle.hpp"
#include "tensornorm/spectral.hpp"
#include "tensornorm/structure.hpp"
#include "tensornorm/symmetry.hpp"
#include "tensornorm/tensor_io.hpp"

namespace tensornorm::cli {

namespace {

using nlohmann::json;

constexpr double kVerifyTolerance = 1e-8;

struct Options {
  std::string tensor_path;
  std::string vector_path;
  std::string p_list;
  std::string method = "hgpm";
  double eps = 1e-10;
  std::size_t max_iter = 10000;
  std::optional<std::size_t> index;
  std::optional<std::uint64_t> seed;
  std::string trace_path;
  std::string blocks;
  bool json = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// nlohmann prints doubles round-trip but not always shortest, so numbers
// are written here with format_double.
void write_json(const json& j, std::ostream& out, int indent, int depth = 0) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      const bool flat = std::none_of(j.begin(), j.end(),
                                     [](const json& e) { return e.is_structured(); });
      if (flat) {
        out << '[';
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out << ", ";
          write_json(j[k], out, indent, depth + 1);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        out << pad;
        write_json(j[k], out, indent, depth + 1);
        out << (k + 1 < j.size() ? ",\n" : "\n");
      }
      out << close << ']';
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out << pad << json(it.key()).dump() << ": ";
        write_json(it.value(), out, indent, depth + 1);
        out << (k + 1 < j.size() ? ",\n" : "\n");
      }
      out << close << '}';
      return;
    }
    default:
      out << j.dump();
  }
}

void emit_json(const json& j, std::ostream& out) {
  write_json(j, out, 2);
  out << '\n';
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw UsageError(std::string("cannot parse '") + item + "' in " + flag);
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError(std::string(flag) + " is empty");
  return values;
}

PVector parse_p(const std::string& text, std::size_t count) {
  auto values = parse_list(text, "--p");
  if (values.size() == 1) values.assign(count, values.front());
  if (values.size() != count) {
    throw UsageError("--p needs 1 or " + std::to_string(count) + " values, got " +
                     std::to_string(values.size()));
  }
  return PVector(std::move(values));
}

json parts_json(const std::vector<Vector>& parts) {
  json out = json::array();
  for (const Vector& part : parts) out.push_back(part);
  return out;
}

int exit_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return kOk;
    case SolveStatus::MaxIter: return kNotConverged;
    case SolveStatus::NumericalBreakdown: return kNumericalBreakdown;
    case SolveStatus::ConditionViolated: return kConditionViolated;
  }
  return kUsage;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConditionViolated: return kConditionViolated;
    case ErrorCode::NotWeaklyIrreducible: return kNotWeaklyIrreducible;
    case ErrorCode::NumericalBreakdown: return kNumericalBreakdown;
    case ErrorCode::NotPartiallySymmetric: return kNotPartiallySymmetric;
    default: return kUsage;
  }
}

void write_trace(const std::string& path, const SolveResult& r) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open trace file " + path);
  auto cell = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
  file << "k,lambda_minus,lambda_plus,err_vs_final\n";
  for (const IterationRecord& rec : r.trace) {
    file << rec.k << ',' << cell(rec.lambda_minus) << ',' << cell(rec.lambda_plus) << ','
         << cell(std::fabs(rec.lambda_estimate - r.lambda)) << '\n';
  }
}

json result_json(const SolveResult& r, const std::string& method) {
  json j;
  j["method"] = method;
  j["status"] = std::string(to_string(r.status));
  j["lambda"] = r.lambda;
  if (r.bracket) {
    j["bracket"] = json::array({r.bracket->first, r.bracket->second});
  } else {
    j["bracket"] = nullptr;
  }
  j["iterations"] = r.iterations;
  if (r.mode_index) {
    j["index"] = *r.mode_index + 1;
  } else {
    j["index"] = nullptr;
  }
  j["q_value"] = r.q_value;
  j["residuals"] = r.residuals;
  j["parts"] = parts_json(r.vector.vector.parts);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

void print_text(const SolveResult& r, const std::string& method, std::ostream& out) {
  out << "method      " << method << '\n' << "status      " << to_string(r.status) << '\n';
  if (std::isfinite(r.lambda)) out << "lambda      " << format_double(r.lambda) << '\n';
  if (r.bracket) {
    out << "bracket     [" << format_double(r.bracket->first) << ", "
        << format_double(r.bracket->second) << "]\n";
  }
  out << "iterations  " << r.iterations << '\n';
  if (r.mode_index) out << "index       " << *r.mode_index + 1 << '\n';
  if (!r.note.empty()) out << "note        " << r.note << '\n';
}

int cmd_check(const Options& o, std::ostream& out) {
  const SparseTensor f = read_tensor_file(o.tensor_path);
  const PVector p = parse_p(o.p_list, f.order());
  const StructureReport report = analyze(f, p);
  json j;
  j["weakly_irreducible"] = report.weakly_irreducible;
  j["irreducible"] = report.irreducible;
  json admissible = json::array();
  for (std::size_t i : report.admissible_indices) admissible.push_back(i + 1);
  j["admissible_indices"] = admissible;
  if (report.chosen_index) {
    j["chosen_index"] = *report.chosen_index + 1;
  } else {
    j["chosen_index"] = nullptr;
  }
  j["notes"] = report.notes;
  emit_json(j, out);
  if (report.admissible_indices.empty()) return kConditionViolated;
  if (!report.weakly_irreducible) return kNotWeaklyIrreducible;
  return kOk;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("TENSORNORM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("TENSORNORM_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

int cmd_norm(const Options& o, std::ostream& out) {
  const SparseTensor f = read_tensor_file(o.tensor_path);
  const PVector p = parse_p(o.p_list, f.order());

  if (o.method == "oracle") {
    if (!o.trace_path.empty()) throw UsageError("--trace is not available for the oracle");
    if (o.index) throw UsageError("--index is not available for the oracle");
    const std::uint64_t seed = resolve_seed(o);
    const OracleResult r = oracle_norm(f, p, 100, seed);
    const SingularPair pair{r.lambda, r.maximizer};
    json j;
    j["method"] = "oracle";
    j["lambda"] = r.lambda;
    j["seed"] = seed;
    j["restarts"] = 100;
    j["residuals"] = residual_check(f, p, pair);
    j["parts"] = parts_json(r.maximizer.parts);
    if (o.json) {
      emit_json(j, out);
    } else {
      out << "method      oracle\n" << "lambda      " << format_double(r.lambda) << '\n';
    }
    return kOk;
  }

  SolveResult r;
  if (o.method == "hgpm") {
    SolverConfig config;
    config.epsilon = o.eps;
    config.max_iter = o.max_iter;
    if (o.index) config.index_override = *o.index - 1;
    r = solve_hgpm(f, p, config);
  } else if (o.method == "pm") {
    if (o.index) throw UsageError("--index is not available for the power method");
    const auto& v = p.values();
    if (std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) != v.end()) {
      throw UsageError("the power method requires equal exponents");
    }
    PmConfig config;
    config.epsilon = o.eps;
    config.max_iter = o.max_iter;
    r = solve_pm(f, v.front(), config);
  } else {
    throw UsageError("unknown method '" + o.method + "'");
  }
  if (!o.trace_path.empty()) write_trace(o.trace_path, r);
  if (o.json) {
    emit_json(result_json(r, o.method), out);
  } else {
    print_text(r, o.method, out);
  }
  return exit_for(r.status);
}

int cmd_eigen(const Options& o, std::ostream& out) {
  const SparseTensor f = read_tensor_file(o.tensor_path);
  SymmetryStructure s;
  for (double q : parse_list(o.blocks, "--blocks")) {
    if (!(q >= 1.0) || q != std::floor(q)) throw UsageError("--blocks needs positive integers");
    s.block_sizes.push_back(static_cast<std::size_t>(q));
  }
  if (s.order() != f.order()) {
    throw UsageError("block sizes sum to " + std::to_string(s.order()) + " but the tensor has order " +
                     std::to_string(f.order()));
  }
  auto exps = parse_list(o.p_list, "--p");
  if (exps.size() == 1) exps.assign(s.block_count(), exps.front());
  if (exps.size() != s.block_count()) throw UsageError("--p needs one value per block");
  s.block_exponents = exps;
  for (std::size_t j = 0; j < s.block_count(); ++j) s.block_dims.push_back(f.dim(s.first_mode(j)));

  SolverConfig config;
  config.epsilon = o.eps;
  config.max_iter = o.max_iter;
  if (o.index) config.index_override = *o.index - 1;
  const EigenResult r = solve_eigenproblem(f, s, config);
  if (!o.trace_path.empty()) write_trace(o.trace_path, r.solve);
  if (o.json) {
    json j = result_json(r.solve, "eigen");
    j["blocks"] = parts_json(r.blocks);
    j["eigen_residuals"] = r.residuals;
    j["structure_notes"] = r.notes;
    emit_json(j, out);
  } else {
    print_text(r.solve, "eigen", out);
    for (const std::string& note : r.notes) out << "note        " << note << '\n';
  }
  return exit_for(r.solve.status);
}

int cmd_verify(const Options& o, std::ostream& out) {
  const SparseTensor f = read_tensor_file(o.tensor_path);
  const PVector p = parse_p(o.p_list, f.order());
  std::ifstream file(o.vector_path);
  if (!file) throw Error(ErrorCode::Parse, "cannot open " + o.vector_path);
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("vector file: ") + e.what());
  }
  if (!doc.contains("lambda") || !doc["lambda"].is_number() || !doc.contains("parts") ||
      !doc["parts"].is_array()) {
    throw Error(ErrorCode::Parse, "vector file needs numeric \"lambda\" and array \"parts\"");
  }
  std::vector<Vector> parts;
  try {
    parts = doc["parts"].get<std::vector<Vector>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("vector file parts: ") + e.what());
  }
  const double lambda = doc["lambda"].get<double>();

  SingularPair candidate;
  if (doc.contains("omitted_mode")) {
    const auto omitted = doc["omitted_mode"].get<std::size_t>();
    if (omitted < 1 || omitted > f.order()) throw Error(ErrorCode::Parse, "omitted_mode out of range");
    if (parts.size() == f.order()) parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(omitted - 1));
    const ReducedSingularPair reduced{lambda, ReducedTupleVector(omitted - 1, parts)};
    try {
      candidate = lift_phi(f, p, reduced);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ResidualTooLarge && e.code() != ErrorCode::DegenerateGradient) throw;
      json j{{"pass", false}, {"note", e.what()}};
      emit_json(j, out);
      return kVerifyFailed;
    }
  } else {
    candidate = {lambda, TupleVector{parts}};
  }
  const auto residuals = residual_check(f, p, candidate);
  const bool pass = std::all_of(residuals.begin(), residuals.end(),
                                [](double r) { return r < kVerifyTolerance; });
  json j;
  j["lambda"] = lambda;
  j["residuals"] = residuals;
  j["tolerance"] = kVerifyTolerance;
  j["pass"] = pass;
  emit_json(j, out);
  return pass ? kOk : kVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projective tensor norms of nonnegative tensors", "tensornorm"};
  app.require_subcommand(1);
  Options o;

  auto solver_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--eps", o.eps, "stopping tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--index", o.index, "mode to eliminate (1-based)")->check(CLI::PositiveNumber);
    cmd->add_option("--trace", o.trace_path, "write k,lambda_minus,lambda_plus,err_vs_final CSV");
    cmd->add_flag("--json", o.json, "print JSON");
  };

  auto* check = app.add_subcommand("check", "structure and exponent condition report");
  check->add_option("tensor", o.tensor_path)->required();
  check->add_option("--p", o.p_list, "exponents, comma separated")->required();

  auto* norm = app.add_subcommand("norm", "compute the projective tensor norm");
  norm->add_option("tensor", o.tensor_path)->required();
  norm->add_option("--p", o.p_list, "exponents, comma separated")->required();
  norm->add_option("--method", o.method, "hgpm, pm or oracle")
      ->check(CLI::IsMember({"hgpm", "pm", "oracle"}));
  norm->add_option("--seed", o.seed, "oracle seed (default TENSORNORM_SEED or 0)");
  solver_flags(norm);

  auto* eigen = app.add_subcommand("eigen", "maximal eigenpair of a partially symmetric tensor");
  eigen->add_option("tensor", o.tensor_path)->required();
  eigen->add_option("--blocks", o.blocks, "block sizes, comma separated")->required();
  eigen->add_option("--p", o.p_list, "one exponent per block")->required();
  solver_flags(eigen);

  auto* verify = app.add_subcommand("verify", "residuals of a candidate singular pair");
  verify->add_option("tensor", o.tensor_path)->required();
  verify->add_option("vector", o.vector_path, "JSON with lambda and parts")->required();
  verify->add_option("--p", o.p_list, "exponents, comma separated")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (norm->parsed()) return cmd_norm(o, out);
    if (eigen->parsed()) return cmd_eigen(o, out);
    return cmd_verify(o, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace tensornorm::cli
