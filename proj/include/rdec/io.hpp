#pragma once

// Map documents: {"domain": system, "codomain": system, "images": [matrix]}.
// A system record is {"kind": full_real|ell_inf|quaternion|complex_full|span,
// "n": order, "basis": [matrix] (span only), "label": text (optional)}.
// Matrices are row-major nested arrays; an entry may be a number or a
// two-element [re, im] array, and a matrix with complex entries is realified.

#include <string>

#include "json.hpp"
#include "rdec/opsys.hpp"

namespace rdec::io {

using mat::RealMatrix;
using opsys::LinearMap;
using opsys::SystemPtr;

// Parse failures throw ValidationError (or ShapeError) whose message starts
// with the offending field path.
RealMatrix parse_matrix(const nlohmann::json& j, const std::string& path);
SystemPtr parse_system(const nlohmann::json& j, const std::string& path);
LinearMap parse_map_document(const std::string& text);
LinearMap read_map_file(const std::string& file);

// Full round-trip precision. Images into complex_full codomains are written
// with [re, im] entries.
nlohmann::json matrix_to_json(const RealMatrix& m);
nlohmann::json complex_matrix_to_json(const RealMatrix& realified);
nlohmann::json system_to_json(const SystemPtr& v);
nlohmann::json map_to_json(const LinearMap& u);
std::string serialize_map_document(const LinearMap& u);

// Report output: numbers rounded to 12 significant digits.
nlohmann::json matrix_to_report(const RealMatrix& m);

}  // namespace rdec::io
