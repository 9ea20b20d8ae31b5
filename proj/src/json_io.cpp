#include "noether/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "noether/errors.hpp"

namespace noether {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void indent(std::ostream& out, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
}

void write_value(const Json& v, std::ostream& out, int depth) {
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        indent(out, depth + 1);
        out << Json(it.key()).dump() << ": ";
        write_value(it.value(), out, depth + 1);
      }
      out << '\n';
      indent(out, depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalars = true;
      for (const auto& e : v) scalars = scalars && !e.is_structured();
      if (scalars) {
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          write_value(v[i], out, depth);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",\n";
        indent(out, depth + 1);
        write_value(v[i], out, depth + 1);
      }
      out << '\n';
      indent(out, depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float:
      out << format_double(v.get<double>());
      return;
    default:
      out << v.dump();
  }
}

std::vector<double> read_vector(const Json& doc, const char* key, std::size_t n) {
  std::vector<double> out(n, 0.0);
  if (!doc.contains(key)) return out;
  const Json& arr = doc.at(key);
  if (!arr.is_array() || arr.size() != n) {
    throw DimensionMismatch(std::string("beta.") + key + " must have " + std::to_string(n) +
                            " entries");
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = arr[i].get<double>();
  return out;
}

}  // namespace

void write_json(const Json& value, std::ostream& out) {
  write_value(value, out, 0);
  out << '\n';
}

std::string dump_json(const Json& value) {
  std::ostringstream os;
  write_json(value, os);
  return os.str();
}

SystemSpec system_from_json(const Json& doc) {
  try {
    if (!doc.is_object()) throw Error("system spec must be a JSON object");
    const auto n = doc.at("n").get<std::size_t>();
    Params params;
    if (doc.contains("params")) {
      for (auto it = doc.at("params").begin(); it != doc.at("params").end(); ++it) {
        params[it.key()] = it.value().get<double>();
      }
    }
    std::vector<std::pair<std::string, std::string>> integrals;
    if (doc.contains("integrals")) {
      for (auto it = doc.at("integrals").begin(); it != doc.at("integrals").end(); ++it) {
        integrals.emplace_back(it.key(), it.value().get<std::string>());
      }
    }
    SystemSpec sys =
        SystemSpec::from_text(n, doc.at("hamiltonian").get<std::string>(), integrals, params);
    if (doc.contains("beta") && !doc.at("beta").is_null()) {
      const Json& b = doc.at("beta");
      Perturbation beta = Perturbation::none(n);
      beta.constant.a = b.value("dt", 0.0);
      beta.constant.b = read_vector(b, "dq", n);
      beta.constant.c = read_vector(b, "dp", n);
      if (b.contains("exact")) beta.potential = sys.parse(b.at("exact").get<std::string>());
      sys.beta = std::move(beta);
    }
    return sys;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid system spec: ") + e.what());
  }
}

Json system_to_json(const SystemSpec& sys) {
  Json doc;
  doc["n"] = sys.n;
  doc["hamiltonian"] = sys.hamiltonian.source();
  Json ints = Json::object();
  for (const auto& [name, expr] : sys.integrals) ints[name] = expr.source();
  doc["integrals"] = std::move(ints);
  Json params = Json::object();
  for (const auto& [name, value] : sys.params) params[name] = value;
  doc["params"] = std::move(params);
  if (sys.beta) {
    Json b;
    b["dt"] = sys.beta->constant.a;
    b["dq"] = sys.beta->constant.b;
    b["dp"] = sys.beta->constant.c;
    if (sys.beta->potential) b["exact"] = sys.beta->potential->source();
    doc["beta"] = std::move(b);
  }
  return doc;
}

SystemSpec load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open system file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("cannot parse system file '" + path + "': " + e.what());
  }
  return system_from_json(doc);
}

}  // namespace noether
