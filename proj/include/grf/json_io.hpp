#pragma once

#include <string>

#include "json.hpp"

#include "grf/basis.hpp"
#include "grf/box.hpp"
#include "grf/event.hpp"
#include "grf/field.hpp"
#include "grf/kernel.hpp"
#include "grf/montecarlo.hpp"

namespace grf::io {

using nlohmann::json;

// Documents (unknown keys are rejected, errors carry a JSON pointer):
//
// basis function
//   {"type":"monomial", "exponents":[2], "amplitude":[1]}
//   {"type":"harmonic", "frequency":[2], "phase":0, "amplitude":[1]}
//   {"type":"bump", "center":[0], "radius":1, "amplitude":[1]}
//   {"type":"scaled", "factor":2, "inner":{...}}
// field   {"m":1, "k":1, "basis":[...], "sigmas":[...]}      sigmas optional
// box     {"lower":[0], "upper":[1], "resolution":256 | [256]}  resolution optional
// event   {"type":"sup_norm_below", "box":{...}, "order":0, "threshold":1}
//         {"type":"zero_count_equals", "box":{...}, "count":1}
//         {"type":"positive_on_box", "box":{...}}
//         {"type":"degenerate_zero", "box":{...}, "value_eps":1e-3, "deriv_eps":1e-3}
// kernel  {"type":"from_kl", "field":{...}}
//         {"type":"closed_form", "tag":"dot"|"affine_dot"|"exp_dot", "m":1}

BasisFunction basis_from_json(const json& j, const std::string& ptr = "");
json to_json(const BasisFunction& f);

KLField field_from_json(const json& j, const std::string& ptr = "");
json to_json(const KLField& field);

Box box_from_json(const json& j, const std::string& ptr = "");
json to_json(const Box& box);

EventSpec event_from_json(const json& j, const std::string& ptr = "");
json to_json(const EventSpec& event);

CovarianceKernel kernel_from_json(const json& j, const std::string& ptr = "");

json to_json(const MCEstimate& e);

/// 16-hex-digit FNV-1a hash of the canonical (sorted-key) serialization.
std::string digest(const json& j);
std::string field_digest(const KLField& field);

/// Parses a file; syntax errors become SchemaError at the root pointer.
json load_json_file(const std::string& path);

}  // namespace grf::io
