// Command-line front end: evaluate the special functions, enumerate and
// check the determinant-n matrix sets, and run the verification suites.
//
// Exit codes: 0 success / all checks pass, 1 any check failed, 2 invalid
// parameter value (domain errors, non-prime modulus, n out of range),
// 64 usage errors (unknown flags, bad arity, unknown names).

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "rhz/report_io.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidValue = 2;
constexpr int kExitUsage = 64;

constexpr const char* kToleranceEnvVar = "RHZ_TOLERANCE";

std::string fmt_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// --- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string function;
  double x = 0.0;
  std::optional<double> y;
  std::string format = "plain";
};

int run_eval(const EvalArgs& args) {
  const bool wants_y = args.function == "rhz";
  if (wants_y && !args.y) {
    std::cerr << "error: eval " << args.function << " requires --y\n";
    return kExitUsage;
  }
  if (!wants_y && args.y) {
    std::cerr << "error: eval " << args.function << " does not take --y\n";
    return kExitUsage;
  }

  double value = 0.0;
  std::optional<double> err_bound;
  if (args.function == "hz") {
    const rhz::RealValue v = rhz::hz(args.x);
    value = v.value;
    err_bound = v.err_bound;
  } else if (args.function == "mhz") {
    const rhz::RealValue v = rhz::mhz(args.x);
    value = v.value;
    err_bound = v.err_bound;
  } else if (args.function == "rhz") {
    const rhz::RealValue v = rhz::rhz(args.x, *args.y);
    value = v.value;
    err_bound = v.err_bound;
  } else if (args.function == "dilog") {
    value = rhz::dilog(args.x);
  } else if (args.function == "rogers") {
    value = rhz::rogers(args.x);
  } else {
    value = rhz::digamma(args.x);
  }

  const rhz::OutputFormat format = rhz::parse_output_format(args.format);
  if (format == rhz::OutputFormat::kJson) {
    nlohmann::json params{{"function", args.function}, {"x", args.x}};
    if (args.y) params["y"] = *args.y;
    nlohmann::json result{{"value", value}};
    if (err_bound) result["err_bound"] = *err_bound;
    std::cout << rhz::render_json(
        rhz::make_document("eval", std::move(params), std::move(result)));
  } else if (format == rhz::OutputFormat::kCsv) {
    std::cout << "function,x,y,value,err_bound\n"
              << args.function << ',' << fmt_full(args.x) << ','
              << (args.y ? fmt_full(*args.y) : "") << ',' << fmt_full(value)
              << ',' << (err_bound ? fmt_full(*err_bound) : "") << '\n';
  } else {
    std::cout << args.function << '(' << fmt_short(args.x);
    if (args.y) std::cout << ", " << fmt_short(*args.y);
    std::cout << ") = " << fmt_full(value);
    if (err_bound) std::cout << "  (err_bound <= " << fmt_short(*err_bound) << ')';
    std::cout << '\n';
  }
  return kExitPass;
}

// --- hecke ------------------------------------------------------------------

int run_hecke_enumerate(std::int64_t n, bool plus, const std::string& format_name) {
  std::vector<rhz::IntMat2> mats = rhz::enumerate_S(n);
  if (plus) mats = rhz::s_plus(mats);

  const rhz::OutputFormat format = rhz::parse_output_format(format_name);
  if (format == rhz::OutputFormat::kJson) {
    nlohmann::json arr = nlohmann::json::array();
    for (const rhz::IntMat2& m : mats) arr.push_back(rhz::to_json(m));
    std::cout << rhz::render_json(rhz::make_document(
        "hecke enumerate", {{"n", n}, {"plus", plus}},
        {{"count", mats.size()}, {"matrices", std::move(arr)}}));
  } else if (format == rhz::OutputFormat::kCsv) {
    std::string out = "a,b,c,d\n";
    for (const rhz::IntMat2& m : mats) {
      out += std::to_string(m.a) + ',' + std::to_string(m.b) + ',' +
             std::to_string(m.c) + ',' + std::to_string(m.d) + '\n';
    }
    std::cout << out;
  } else {
    for (const rhz::IntMat2& m : mats) std::cout << rhz::format_matrix(m) << '\n';
    std::cout << (plus ? "S_n^+ size: " : "S_n size: ") << mats.size() << '\n';
  }
  return kExitPass;
}

int run_hecke_check_cn(std::int64_t n, const std::string& mode_name,
                       const std::string& format_name) {
  const rhz::CnMode mode = mode_name == "total" ? rhz::CnMode::kTotal
                                                : rhz::CnMode::kPerOrbit;
  const rhz::CnReport report = rhz::check_cn(rhz::theta(n), n, mode);

  const rhz::OutputFormat format = rhz::parse_output_format(format_name);
  if (format == rhz::OutputFormat::kCsv) {
    std::cerr << "error: csv output is not supported for check-cn\n";
    return kExitUsage;
  }
  if (format == rhz::OutputFormat::kJson) {
    nlohmann::json result = rhz::to_json(report);
    result["n"] = n;
    std::cout << rhz::render_json(rhz::make_document(
        "hecke check-cn", {{"n", n}, {"mode", mode_name}}, std::move(result)));
  } else {
    for (const rhz::OrbitDivisor& o : report.orbits) {
      std::cout << "orbit " << rhz::format_matrix(o.canonical) << ": boundary "
                << rhz::format_divisor(o.divisor) << "  "
                << (o.ok ? "ok" : "MISMATCH") << '\n';
    }
    if (mode == rhz::CnMode::kTotal) {
      std::cout << "total boundary: " << rhz::format_divisor(report.total) << '\n';
    }
    std::cout << "C_" << n << " (" << mode_name << "): "
              << (report.pass ? "PASS" : "FAIL") << '\n';
  }
  return report.pass ? kExitPass : kExitCheckFailed;
}

int run_hecke_chains(std::int64_t l, const std::string& format_name) {
  const rhz::ChainDecomposition dec = rhz::chain_decompose(l);

  const rhz::OutputFormat format = rhz::parse_output_format(format_name);
  if (format == rhz::OutputFormat::kCsv) {
    std::cerr << "error: csv output is not supported for chains\n";
    return kExitUsage;
  }
  if (format == rhz::OutputFormat::kJson) {
    nlohmann::json result = rhz::to_json(dec);
    result["l"] = l;
    std::cout << rhz::render_json(
        rhz::make_document("hecke chains", {{"l", l}}, std::move(result)));
  } else {
    std::cout << "diagonals: " << rhz::format_matrix(dec.diag_upper) << ", "
              << rhz::format_matrix(dec.diag_lower) << '\n';
    for (std::size_t i = 0; i < dec.chains.size(); ++i) {
      const rhz::Chain& c = dec.chains[i];
      std::cout << "chain " << i + 1 << ": length " << c.matrices.size()
                << ", x_n = " << c.x_n << '\n';
    }
  }
  return kExitPass;
}

// --- verify -------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::vector<std::int64_t> primes{2, 3, 5, 7, 11, 13};
  std::vector<std::int64_t> determinants{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> grid{0.3, 0.7, 1.5, 2.0, 5.0};
  std::vector<double> xs;
  std::vector<double> ys;
  double tolerance = 0.0;  // 0 = per-identity default
  bool tolerance_given = false;
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  std::string out_path;
  std::string format = "plain";
  bool format_given = false;
};

// Maps CLI suite names to run_grid identities; "all" and the sampled
// five-term mode are handled separately.
const std::map<std::string, std::string>& suite_identities() {
  static const std::map<std::string, std::string> m{
      {"theorem1", "theorem1"},   {"rz", "rz"},
      {"telescope", "telescope"}, {"chain-sum", "chain_sum"},
      {"complement", "complement_sum"}};
  return m;
}

rhz::GridSpec grid_for(const VerifyArgs& args) {
  rhz::GridSpec grid;
  grid.x_values = args.xs.empty() ? args.grid : args.xs;
  grid.y_values = args.ys.empty() ? args.grid : args.ys;
  return grid;
}

// Explicit flag wins, then the environment override, then the per-identity
// default (signalled to run_grid as 0).
double effective_tolerance(const VerifyArgs& args) {
  if (args.tolerance_given) return args.tolerance;
  if (const char* env = std::getenv(kToleranceEnvVar)) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || v < 0.0) {
      throw std::invalid_argument(std::string(kToleranceEnvVar) +
                                  " must be a non-negative number");
    }
    return v;
  }
  return 0.0;
}

rhz::RunResult run_five_term_sample(const VerifyArgs& args, double tolerance) {
  const double tol = tolerance > 0.0 ? tolerance : rhz::kDefaultModTolerance;
  rhz::RunResult run;
  for (const auto& [x, y] : rhz::sample_five_term_pairs(args.count, args.seed)) {
    run.reports.push_back(rhz::check_five_term(x, y, tol));
  }
  return run;
}

std::string plain_report_line(const rhz::CheckReport& r) {
  std::string line = r.identity;
  if (r.l_or_n != 0) {
    line += r.identity == "rz" ? " n=" : " l=";
    line += std::to_string(r.l_or_n);
  }
  if (r.chain_index != 0) line += " chain=" + std::to_string(r.chain_index);
  if (r.has_matrix) line += " M=" + rhz::format_matrix(r.matrix);
  line += " x=" + fmt_short(r.x);
  const bool has_y = r.identity != "reflection" && r.identity != "rz";
  if (has_y) line += " y=" + fmt_short(r.y);
  line += r.pass ? ": PASS" : ": FAIL";
  const bool exact = r.identity == "rz" || r.identity == "complement_sum";
  if (exact) {
    line += " residual=" + fmt_short(r.residual);
  } else {
    line += " k=" + std::to_string(r.zeta2_multiple);
    line += " excess=" + fmt_short(r.excess);
  }
  line += " (tol " + fmt_short(r.tolerance) + ")";
  return line;
}

std::string render_plain_run(const rhz::RunResult& run) {
  std::string out;
  for (const rhz::CheckReport& r : run.reports) {
    out += plain_report_line(r) + '\n';
  }
  for (const rhz::SkipRecord& s : run.skips) {
    out += "skip " + s.identity;
    if (s.l_or_n != 0) out += " l=" + std::to_string(s.l_or_n);
    if (s.chain_index != 0) out += " chain=" + std::to_string(s.chain_index);
    out += " x=" + fmt_short(s.x) + " y=" + fmt_short(s.y) + ": " + s.reason + '\n';
  }
  std::size_t passed = 0;
  for (const rhz::CheckReport& r : run.reports) passed += r.pass ? 1 : 0;
  out += "summary: " + std::to_string(passed) + '/' +
         std::to_string(run.reports.size()) + " passed, " +
         std::to_string(run.skips.size()) + " skipped, max excess " +
         fmt_short(run.max_excess()) + '\n';
  return out;
}

int run_verify(const VerifyArgs& args) {
  const double tolerance = effective_tolerance(args);
  const rhz::GridSpec grid = grid_for(args);
  const bool sampled_five_term =
      args.suite == "five-term" && args.xs.empty() && args.ys.empty();

  // Ordered (suite label, result) pairs; "all" runs everything.
  std::vector<std::pair<std::string, rhz::RunResult>> runs;
  if (args.suite == "all" || args.suite == "five-term") {
    if (sampled_five_term || args.suite == "all") {
      runs.emplace_back("five_term", run_five_term_sample(args, tolerance));
    } else {
      runs.emplace_back("five_term",
                        rhz::run_grid("five_term", {}, grid, tolerance));
    }
  }
  for (const auto& [suite, identity] : suite_identities()) {
    if (args.suite != "all" && args.suite != suite) continue;
    const auto& moduli =
        identity == "rz" ? args.determinants : args.primes;
    runs.emplace_back(identity, rhz::run_grid(identity, moduli, grid, tolerance));
  }

  bool all_pass = true;
  for (const auto& [label, run] : runs) all_pass = all_pass && run.all_pass();

  // Header lines describe exactly what ran; the seed line is what makes a
  // sampled five-term report reproducible.
  std::string header = "suite: " + args.suite + '\n';
  if (args.suite == "all" || args.suite == "five-term") {
    if (sampled_five_term || args.suite == "all") {
      header += "seed: " + std::to_string(args.seed) + '\n';
      header += "count: " + std::to_string(args.count) + '\n';
    }
  }
  if (args.suite != "five-term") {
    std::string moduli_line = "moduli:";
    const auto& moduli = args.suite == "rz" ? args.determinants : args.primes;
    for (const std::int64_t m : moduli) moduli_line += ' ' + std::to_string(m);
    header += moduli_line + '\n';
  }
  if (!sampled_five_term) {
    std::string gx = "grid x:";
    for (const double v : grid.x_values) gx += ' ' + fmt_short(v);
    header += gx + '\n';
    if (args.suite != "rz") {  // rz sweeps x only
      std::string gy = "grid y:";
      for (const double v : grid.y_values) gy += ' ' + fmt_short(v);
      header += gy + '\n';
    }
  }
  header += "tolerance: ";
  header += tolerance > 0.0 ? fmt_short(tolerance) : "per-identity default";
  header += '\n';

  // Assemble the three encodings on demand.
  const auto render_plain = [&] {
    std::string out = header;
    for (const auto& [label, run] : runs) {
      if (runs.size() > 1) out += "--- " + label + " ---\n";
      out += render_plain_run(run);
    }
    out += all_pass ? "result: PASS\n" : "result: FAIL\n";
    return out;
  };
  const auto render_json_doc = [&] {
    nlohmann::json params{{"suite", args.suite}, {"tolerance", tolerance}};
    if (args.suite == "all" || args.suite == "five-term") {
      if (sampled_five_term || args.suite == "all") {
        params["seed"] = args.seed;
        params["count"] = args.count;
      }
    }
    if (args.suite != "five-term") {
      params["moduli"] =
          args.suite == "rz" ? args.determinants : args.primes;
    }
    if (!sampled_five_term) {
      params["grid"] = {{"x", grid.x_values}, {"y", grid.y_values}};
    }
    nlohmann::json result;
    if (runs.size() == 1) {
      result = rhz::to_json(runs.front().second);
    } else {
      for (const auto& [label, run] : runs) result[label] = rhz::to_json(run);
    }
    result["all_pass"] = all_pass;
    return rhz::render_json(
        rhz::make_document("verify", std::move(params), std::move(result)));
  };
  const auto render_csv_doc = [&] {
    std::vector<rhz::CheckReport> reports;
    for (const auto& [label, run] : runs) {
      reports.insert(reports.end(), run.reports.begin(), run.reports.end());
    }
    return rhz::render_csv(reports);
  };

  // --out writes the full report to the file (format from --format, or
  // inferred from the extension) and keeps a plain summary on stdout.
  std::string format_name = args.format;
  if (!args.format_given && !args.out_path.empty()) {
    if (args.out_path.ends_with(".json")) format_name = "json";
    else if (args.out_path.ends_with(".csv")) format_name = "csv";
  }
  const rhz::OutputFormat format = rhz::parse_output_format(format_name);
  std::string rendered;
  switch (format) {
    case rhz::OutputFormat::kPlain: rendered = render_plain(); break;
    case rhz::OutputFormat::kJson: rendered = render_json_doc(); break;
    case rhz::OutputFormat::kCsv: rendered = render_csv_doc(); break;
  }

  if (args.out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open '" << args.out_path << "' for writing\n";
      return kExitInvalidValue;
    }
    out << rendered;
    std::cout << header << "report written to " << args.out_path << '\n'
              << (all_pass ? "result: PASS\n" : "result: FAIL\n");
  }
  return all_pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Herglotz-Zagier toolkit: special-function evaluation, determinant-n "
      "matrix sets, and numerical verification of the refined-function "
      "identities."};
  app.require_subcommand(1);

  // eval ---------------------------------------------------------------
  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Evaluate hz, mhz, rhz, dilog, rogers or digamma at a point");
  eval->add_option("function", eval_args.function, "Function name")
      ->required()
      ->check(CLI::IsMember({"hz", "mhz", "rhz", "dilog", "rogers", "digamma"}));
  eval->add_option("--x", eval_args.x, "Evaluation point")->required();
  eval->add_option("--y", eval_args.y, "Second point (rhz only)");
  eval->add_option("--format", eval_args.format, "plain, json or csv")
      ->check(CLI::IsMember({"plain", "json", "csv"}));

  // hecke ----------------------------------------------------------------
  CLI::App* hecke = app.add_subcommand(
      "hecke", "Enumerate and check the determinant-n matrix sets");
  hecke->require_subcommand(1);

  std::int64_t enum_n = 0;
  bool enum_plus = false;
  std::string enum_format = "plain";
  CLI::App* enumerate =
      hecke->add_subcommand("enumerate", "List S_n (or S_n^+ with --plus)");
  enumerate->add_option("--n", enum_n, "Determinant")->required();
  enumerate->add_flag("--plus", enum_plus, "Restrict to b > 0 (S_n^+)");
  enumerate->add_option("--format", enum_format, "plain, json or csv")
      ->check(CLI::IsMember({"plain", "json", "csv"}));

  std::int64_t cn_n = 0;
  std::string cn_mode = "per-orbit";
  std::string cn_format = "plain";
  CLI::App* check_cn = hecke->add_subcommand(
      "check-cn", "Check the boundary condition C_n for theta_n");
  check_cn->add_option("--n", cn_n, "Determinant")->required();
  check_cn->add_option("--mode", cn_mode, "per-orbit (default) or total")
      ->check(CLI::IsMember({"per-orbit", "total"}));
  check_cn->add_option("--format", cn_format, "plain or json")
      ->check(CLI::IsMember({"plain", "json", "csv"}));

  std::int64_t chains_l = 0;
  std::string chains_format = "plain";
  CLI::App* chains = hecke->add_subcommand(
      "chains", "Decompose S_l into linked chains (prime l)");
  chains->add_option("--l", chains_l, "Prime modulus")->required();
  chains->add_option("--format", chains_format, "plain or json")
      ->check(CLI::IsMember({"plain", "json", "csv"}));

  // verify ------------------------------------------------------------
  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "Run a verification suite over a parameter grid. Defaults: grid "
      "{0.3, 0.7, 1.5, 2.0, 5.0} for x and y (excluded pairs are skipped "
      "and reported), primes {2, 3, 5, 7, 11, 13}, determinants 1..10, "
      "per-identity tolerances (1e-8 exact, 1e-6 mod zeta(2), 1e-10 "
      "complement); RHZ_TOLERANCE overrides the default tolerance.");
  verify
      ->add_option("suite", verify_args.suite,
                   "theorem1, rz, five-term, telescope, chain-sum, "
                   "complement or all")
      ->required()
      ->check(CLI::IsMember({"theorem1", "rz", "five-term", "telescope",
                             "chain-sum", "complement", "all"}));
  verify->add_option("--l", verify_args.primes,
                     "Prime moduli (default 2 3 5 7 11 13)");
  verify->add_option("--n", verify_args.determinants,
                     "Determinants for rz (default 1..10)");
  verify->add_option("--grid", verify_args.grid,
                     "Grid values for both x and y (default 0.3 0.7 1.5 2 5)");
  verify->add_option("--x", verify_args.xs, "Explicit x values (overrides --grid)");
  verify->add_option("--y", verify_args.ys, "Explicit y values (overrides --grid)");
  verify
      ->add_option("--tolerance", verify_args.tolerance,
                   "Tolerance for every check (default: per identity)")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", verify_args.seed,
                     "Seed for five-term sampling (default 0)");
  verify->add_option("--count", verify_args.count,
                     "Number of sampled five-term pairs (default 1000)");
  verify->add_option("--out", verify_args.out_path,
                     "Write the full report to this file");
  verify->add_option("--format", verify_args.format, "plain, json or csv")
      ->check(CLI::IsMember({"plain", "json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  verify_args.tolerance_given = verify->count("--tolerance") > 0;
  verify_args.format_given = verify->count("--format") > 0;

  try {
    if (app.got_subcommand(eval)) return run_eval(eval_args);
    if (app.got_subcommand(hecke)) {
      if (hecke->got_subcommand(enumerate)) {
        return run_hecke_enumerate(enum_n, enum_plus, enum_format);
      }
      if (hecke->got_subcommand(check_cn)) {
        return run_hecke_check_cn(cn_n, cn_mode, cn_format);
      }
      return run_hecke_chains(chains_l, chains_format);
    }
    return run_verify(verify_args);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidValue;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidValue;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidValue;
  } catch (const std::logic_error& e) {
    std::cerr << "structural check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}
