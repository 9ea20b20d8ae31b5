#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "noether/geometry.hpp"

namespace noether {

using Json = nlohmann::ordered_json;

/// %.17g; non-finite values print as null.
std::string format_double(double v);

/// Deterministic pretty printer: keys in insertion order, two-space indent,
/// floating-point numbers at 17 significant digits.
void write_json(const Json& value, std::ostream& out);
std::string dump_json(const Json& value);

/// System-spec document:
/// {"n", "hamiltonian", "integrals": {name: text}, "params": {name: value},
///  "beta": {"dt", "dq": [..], "dp": [..], "exact": text}} with beta optional.
SystemSpec system_from_json(const Json& doc);
Json system_to_json(const SystemSpec& sys);
SystemSpec load_system_file(const std::string& path);

}  // namespace noether
