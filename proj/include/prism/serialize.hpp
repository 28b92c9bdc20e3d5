#pragma once

#include <string>

#include "prism/bounds.hpp"
#include "prism/rational.hpp"
#include "prism/verify.hpp"

namespace prism {

// Shortest decimal string that round-trips the value exactly.
std::string format_double(double v);

// Configuration file schema (JSON object, all keys required):
//   {
//     "epsilon": 1 | -1,
//     "n": odd integer,
//     "real_factors": [[pos, sign], ...],
//     "imag_factors": [[pos, sign], ...],
//     "interior_factors": [[re, im, sign], ...],
//     "rotations": 0 | 1 | 2,
//     "conjugated": bool,
//     "glue": null | {"w0": [re, im], "eps": number, "W": integer >= 1}
//   }
// Serialization is deterministic: fixed key order, two-space indent,
// trailing newline.
std::string serialize_configuration(const Configuration& cfg);

// Throws SchemaError on malformed JSON, missing or unknown keys, or wrong
// value types; throws std::invalid_argument on structural violations.
Configuration parse_configuration(const std::string& text);

// File variants; throw IoError when the path cannot be written or read.
void save_configuration(const Configuration& cfg, const std::string& path);
Configuration load_configuration(const std::string& path);

// JSON payloads for the command-line reports. Topologies appear as
// {"e": [..], "k": [..], "m": ..}; absent measurements serialize as null.
std::string classification_json(const VertexTopology& vt);
std::string verification_json(const VerificationReport& report);
std::string bounds_json(const BoundsReport& report);

}  // namespace prism
