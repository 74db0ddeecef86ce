#include "rhz/report_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace rhz {

namespace {

// %.17g round-trips every finite double and never varies across runs.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "plain") return OutputFormat::kPlain;
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  throw std::invalid_argument("unknown output format '" + name +
                              "' (expected plain, json or csv)");
}

std::string format_matrix(const IntMat2& m) {
  char buf[96];
  std::snprintf(buf, sizeof buf,
                "[[%" PRId64 ", %" PRId64 "], [%" PRId64 ", %" PRId64 "]]",
                m.a, m.b, m.c, m.d);
  return buf;
}

std::string format_point(const ProjPoint& p) {
  if (p.is_infinity()) return "inf";
  if (p.q == 1) return std::to_string(p.p);
  return std::to_string(p.p) + "/" + std::to_string(p.q);
}

std::string format_divisor(const P1Divisor& d) {
  if (d.empty()) return "0";
  std::string out;
  for (const auto& [point, coeff] : d.terms()) {
    const std::int64_t mag = coeff < 0 ? -coeff : coeff;
    if (out.empty()) {
      if (coeff < 0) out += "-";
    } else {
      out += coeff < 0 ? " - " : " + ";
    }
    if (mag != 1) out += std::to_string(mag) + "*";
    out += "(" + format_point(point) + ")";
  }
  return out;
}

nlohmann::json to_json(const IntMat2& m) {
  return nlohmann::json::array({m.a, m.b, m.c, m.d});
}

nlohmann::json to_json(const RealValue& v) {
  return {{"value", v.value}, {"err_bound", v.err_bound}};
}

nlohmann::json to_json(const P1Divisor& d) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [point, coeff] : d.terms()) {
    terms.push_back({{"point", format_point(point)}, {"coeff", coeff}});
  }
  return terms;
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j{{"identity", r.identity}, {"l_or_n", r.l_or_n},
                   {"chain_index", r.chain_index}, {"x", r.x},
                   {"y", r.y},           {"lhs", r.lhs},
                   {"rhs", r.rhs},       {"residual", r.residual},
                   {"k", r.zeta2_multiple}, {"excess", r.excess},
                   {"err_bound", r.err_bound}, {"tolerance", r.tolerance},
                   {"pass", r.pass}};
  if (r.has_matrix) j["matrix"] = to_json(r.matrix);
  return j;
}

nlohmann::json to_json(const SkipRecord& s) {
  return {{"identity", s.identity}, {"l_or_n", s.l_or_n},
          {"chain_index", s.chain_index}, {"x", s.x},
          {"y", s.y},           {"reason", s.reason}};
}

nlohmann::json to_json(const RunResult& r) {
  nlohmann::json reports = nlohmann::json::array();
  std::size_t failed = 0;
  for (const CheckReport& rep : r.reports) {
    reports.push_back(to_json(rep));
    if (!rep.pass) ++failed;
  }
  nlohmann::json skips = nlohmann::json::array();
  for (const SkipRecord& s : r.skips) skips.push_back(to_json(s));
  return {{"reports", reports},
          {"skips", skips},
          {"summary",
           {{"total", r.reports.size()},
            {"passed", r.reports.size() - failed},
            {"failed", failed},
            {"skipped", r.skips.size()},
            {"max_excess", r.max_excess()},
            {"all_pass", r.all_pass()}}}};
}

nlohmann::json to_json(const OrbitDivisor& o) {
  return {{"canonical", to_json(o.canonical)},
          {"divisor", to_json(o.divisor)},
          {"ok", o.ok}};
}

nlohmann::json to_json(const CnReport& r) {
  nlohmann::json orbits = nlohmann::json::array();
  for (const OrbitDivisor& o : r.orbits) orbits.push_back(to_json(o));
  return {{"mode", r.mode == CnMode::kPerOrbit ? "per-orbit" : "total"},
          {"pass", r.pass},
          {"orbits", orbits},
          {"total", to_json(r.total)}};
}

nlohmann::json to_json(const ChainDecomposition& d) {
  nlohmann::json chains = nlohmann::json::array();
  for (std::size_t i = 0; i < d.chains.size(); ++i) {
    const Chain& c = d.chains[i];
    nlohmann::json mats = nlohmann::json::array();
    for (const IntMat2& m : c.matrices) mats.push_back(to_json(m));
    chains.push_back({{"index", i + 1},
                      {"length", c.matrices.size()},
                      {"x_n", c.x_n},
                      {"matrices", mats}});
  }
  return {{"diag_upper", to_json(d.diag_upper)},
          {"diag_lower", to_json(d.diag_lower)},
          {"chains", chains}};
}

nlohmann::json make_document(const std::string& command,
                             nlohmann::json params, nlohmann::json result) {
  return {{"schema", 1},
          {"command", command},
          {"params", std::move(params)},
          {"result", std::move(result)}};
}

std::string render_json(const nlohmann::json& doc) {
  return doc.dump(2) + "\n";
}

std::string render_csv(const std::vector<CheckReport>& reports) {
  std::string out = "identity,l_or_n,x,y,residual,k,excess,pass\n";
  for (const CheckReport& r : reports) {
    const bool has_y = r.identity != "reflection" && r.identity != "rz";
    const bool has_l = r.l_or_n != 0;
    out += r.identity;
    out += ',';
    if (has_l) out += std::to_string(r.l_or_n);
    out += ',';
    out += format_double(r.x);
    out += ',';
    if (has_y) out += format_double(r.y);
    out += ',';
    out += format_double(r.residual);
    out += ',';
    out += std::to_string(r.zeta2_multiple);
    out += ',';
    out += format_double(r.excess);
    out += ',';
    out += r.pass ? "true" : "false";
    out += '\n';
  }
  return out;
}

}  // namespace rhz
