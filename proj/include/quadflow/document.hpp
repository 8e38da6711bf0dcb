#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "quadflow/system.hpp"

namespace quadflow {

// Input file contents. JSON layout:
//   { "c":  [[z11..z16], [z21..z26]],   z = [re, im] or a plain number
//     "A":  [[A11, A12], [A21, A22]],
//     "a":  [[a12, a11, a10], [a22, a21, a20]],
//     "x0": [x1, x2],
//     "metadata": { "key": "value", ... } }
// At least one of "c" and ("A", "a") is required. When both are present the
// forward image of the structural part has to agree with "c".
struct SystemDocument {
  std::optional<Coefficients> coefficients;
  std::optional<StructuralParams> structural;
  std::optional<InitialState> initial_state;
  std::map<std::string, std::string> metadata;

  // "c" if given, otherwise forward(structural).
  Coefficients resolved_coefficients(const Tolerance& tol = {}) const;
};

// Throws Error(InvalidInput) for malformed input and Error(ConstraintViolated)
// when "c" disagrees with the structural part.
SystemDocument parse_document(const std::string& text, const Tolerance& tol = {});
SystemDocument load_document(const std::string& path, const Tolerance& tol = {});

nlohmann::ordered_json to_json(Complex z);
nlohmann::ordered_json to_json(const Coefficients& c);
nlohmann::ordered_json to_json(const StructuralParams& sp);
nlohmann::ordered_json to_json(const InitialState& x);
nlohmann::ordered_json to_json(const SystemDocument& doc);

// Pretty printer with every number written as %.17g so output is byte-stable.
std::string dump(const nlohmann::ordered_json& j, int indent = 2);

// %.17g
std::string format_double(double v);

}  // namespace quadflow
