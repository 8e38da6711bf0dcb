#include "quadflow/document.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quadflow/error.hpp"
#include "quadflow/forward_map.hpp"

namespace quadflow {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

Complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  bad(where + ": expected a number or an [re, im] pair");
}

template <std::size_t Rows, std::size_t Cols>
std::array<std::array<Complex, Cols>, Rows> parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != Rows) bad(name + ": expected " + std::to_string(Rows) + " rows");
  std::array<std::array<Complex, Cols>, Rows> m{};
  for (std::size_t r = 0; r < Rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != Cols) {
      bad(name + ": row " + std::to_string(r + 1) + " needs " + std::to_string(Cols) + " entries");
    }
    for (std::size_t k = 0; k < Cols; ++k) {
      m[r][k] = parse_complex(row[k], name + "[" + std::to_string(r + 1) + "][" + std::to_string(k + 1) + "]");
    }
  }
  return m;
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  out += format_double(v);
}

void write(std::string& out, const ordered_json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string pad_end(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += ordered_json(it.key()).dump();
        out += ": ";
        write(out, it.value(), indent, depth + 1);
      }
      out += "\n" + pad_end + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const ordered_json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(out, j[i], indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(out, j[i], indent, depth + 1);
      }
      out += "\n" + pad_end + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

Coefficients SystemDocument::resolved_coefficients(const Tolerance& tol) const {
  if (coefficients) return *coefficients;
  if (structural) return forward(*structural, tol);
  throw Error(ErrorCode::InvalidInput, "document has neither coefficients nor structural parameters");
}

SystemDocument parse_document(const std::string& text, const Tolerance& tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");

  SystemDocument doc;
  if (j.contains("c")) {
    Coefficients c;
    c.c = parse_matrix<2, 6>(j["c"], "c");
    require_finite(c);
    doc.coefficients = c;
  }
  const bool hasA = j.contains("A"), has_a = j.contains("a");
  if (hasA != has_a) bad("\"A\" and \"a\" must be given together");
  if (hasA) {
    StructuralParams sp;
    sp.A = parse_matrix<2, 2>(j["A"], "A");
    sp.a = parse_matrix<2, 3>(j["a"], "a");
    require_finite(sp);
    doc.structural = sp;
  }
  if (!doc.coefficients && !doc.structural) bad("need \"c\" or both \"A\" and \"a\"");

  if (j.contains("x0")) {
    const auto& x = j["x0"];
    if (!x.is_array() || x.size() != 2) bad("x0: expected two entries");
    doc.initial_state = InitialState{parse_complex(x[0], "x0[1]"), parse_complex(x[1], "x0[2]")};
    require_finite(*doc.initial_state);
  }
  if (j.contains("metadata")) {
    const auto& m = j["metadata"];
    if (!m.is_object()) bad("metadata must be an object");
    for (auto it = m.begin(); it != m.end(); ++it) {
      doc.metadata[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
    }
  }

  if (doc.coefficients && doc.structural) {
    const Coefficients f = forward(*doc.structural, tol);
    const double s = std::max(f.scale(), doc.coefficients->scale());
    for (int n = 1; n <= 2; ++n) {
      for (int k = 1; k <= 6; ++k) {
        const Complex d = f(n, k) - (*doc.coefficients)(n, k);
        if (!negligible(d, std::max(s, std::abs(f(n, k))), tol)) {
          throw Error(ErrorCode::ConstraintViolated, "coefficients disagree with forward(A, a) at c" +
                                                         std::to_string(n) + std::to_string(k));
        }
      }
    }
  }
  return doc;
}

SystemDocument load_document(const std::string& path, const Tolerance& tol) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), tol);
}

ordered_json to_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json to_json(const Coefficients& c) {
  ordered_json out = ordered_json::array();
  for (const auto& row : c.c) {
    ordered_json r = ordered_json::array();
    for (const auto& v : row) r.push_back(to_json(v));
    out.push_back(r);
  }
  return out;
}

ordered_json to_json(const StructuralParams& sp) {
  ordered_json A = ordered_json::array(), a = ordered_json::array();
  for (const auto& row : sp.A) A.push_back({to_json(row[0]), to_json(row[1])});
  for (const auto& row : sp.a) a.push_back({to_json(row[0]), to_json(row[1]), to_json(row[2])});
  return {{"A", A}, {"a", a}};
}

ordered_json to_json(const InitialState& x) { return ordered_json::array({to_json(x.x1), to_json(x.x2)}); }

ordered_json to_json(const SystemDocument& doc) {
  ordered_json j = ordered_json::object();
  if (doc.coefficients) j["c"] = to_json(*doc.coefficients);
  if (doc.structural) {
    const auto s = to_json(*doc.structural);
    j["A"] = s["A"];
    j["a"] = s["a"];
  }
  if (doc.initial_state) j["x0"] = to_json(*doc.initial_state);
  if (!doc.metadata.empty()) {
    ordered_json m = ordered_json::object();
    for (const auto& [k, v] : doc.metadata) m[k] = v;
    j["metadata"] = m;
  }
  return j;
}

std::string dump(const ordered_json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  out += "\n";
  return out;
}

}  // namespace quadflow
