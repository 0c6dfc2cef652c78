#pragma once

// Config ingestion and report serialisation.
//
// Complex numbers are [re, im] pairs or plain reals; vectors are lists of
// those; matrices are lists of rows. Domains:
//   {"kind": "I", "m": 2, "n": 3} | {"kind": "II", "p": 3} | {"kind": "III", "q": 4}
//   | {"kind": "IV", "N": 3} | {"kind": "Product", "factors": [...]}
// Maps: {"family": name, "params": {...}, "children": [...]}. The mobius
// family takes "P" as a matrix or "point" as intrinsic coordinates.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cartan/maps.hpp"

namespace cartan::jsonio {

using Json = nlohmann::ordered_json;

Json parse(const std::string& text);

cplx parse_complex(const Json& j);
CVec parse_vector(const Json& j);
CMat parse_matrix(const Json& j);
Domain parse_domain(const Json& j);
HoloMap parse_map(const Domain& d, const Json& j);

Json to_json(cplx c);
Json to_json(const CVec& v);
Json to_json(const CMat& m);

/// Like Json::dump but every float printed with 17 significant digits.
std::string dump(const Json& j, int indent = 2);

std::uint64_t fnv1a(const std::string& bytes);

/// Shortest 17-significant-digit rendering used in CSV output too.
std::string format_double(double x);

}  // namespace cartan::jsonio
