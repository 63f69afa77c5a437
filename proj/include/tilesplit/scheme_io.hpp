#pragma once

#include <string>

#include "tilesplit/scheme.hpp"

namespace tilesplit {

/// Parse a scheme from JSON text.  Unknown fields are rejected.  Throws
/// ParseError on malformed input and InvalidScheme on structural problems.
[[nodiscard]] Scheme parse_scheme(const std::string& json_text);

/// Read a whole file; throws ParseError when it cannot be read.
[[nodiscard]] std::string read_file(const std::string& path);

/// read_file + parse_scheme.
[[nodiscard]] Scheme load_scheme(const std::string& path);

/// Canonical JSON for a scheme; parse_scheme(serialize_scheme(s)) reproduces
/// the same scheme.
[[nodiscard]] std::string serialize_scheme(const Scheme& s);

/// Stable hex digest of a config's raw bytes, embedded in reports.
[[nodiscard]] std::string config_hash(const std::string& json_text);

}  // namespace tilesplit
