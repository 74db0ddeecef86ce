#pragma once

// Serialization of evaluation results, matrix sets and check reports:
// plain text for terminals, a versioned JSON document for machines, CSV for
// spreadsheets. All encoders are deterministic (sorted keys, fixed float
// formatting, no timestamps), so identical inputs give byte-identical output.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rhz/hecke.hpp"
#include "rhz/numkernel.hpp"
#include "rhz/verify.hpp"

namespace rhz {

enum class OutputFormat { kPlain, kJson, kCsv };

// Parses "plain" / "json" / "csv"; throws std::invalid_argument otherwise.
OutputFormat parse_output_format(const std::string& name);

// --- plain-text fragments -------------------------------------------------

std::string format_matrix(const IntMat2& m);    // [[a, b], [c, d]]
std::string format_point(const ProjPoint& p);   // "p/q", "p" when q = 1, "inf"
std::string format_divisor(const P1Divisor& d); // e.g. "(inf) - (0)", "0"

// --- JSON values ------------------------------------------------------------

nlohmann::json to_json(const IntMat2& m);       // [a, b, c, d]
nlohmann::json to_json(const RealValue& v);
nlohmann::json to_json(const P1Divisor& d);     // [{"coeff": n, "point": s}]
nlohmann::json to_json(const CheckReport& r);
nlohmann::json to_json(const SkipRecord& s);
nlohmann::json to_json(const RunResult& r);     // reports + skips + summary
nlohmann::json to_json(const OrbitDivisor& o);
nlohmann::json to_json(const CnReport& r);
nlohmann::json to_json(const ChainDecomposition& d);

// Wraps a command's parameters and result in the versioned envelope:
//   {"schema": 1, "command": ..., "params": ..., "result": ...}
nlohmann::json make_document(const std::string& command,
                             nlohmann::json params, nlohmann::json result);

// dump(2) with sorted keys and a trailing newline.
std::string render_json(const nlohmann::json& doc);

// --- CSV --------------------------------------------------------------------

// Header "identity,l_or_n,x,y,residual,k,excess,pass" plus one row per
// report. Fields that do not apply to an identity (y for single-point
// checks, l_or_n for parameter-free ones) are left empty.
std::string render_csv(const std::vector<CheckReport>& reports);

}  // namespace rhz
