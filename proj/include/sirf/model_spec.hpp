#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sirf/model.hpp"

namespace sirf {

/// A model loaded from its JSON description.  `canonical` is the
/// normalized echo ({"k": ..., "f": {...}} with defaults filled in) that
/// reports embed; feeding it back to load_model_json reproduces the model.
struct LoadedModel {
    Model model;
    nlohmann::ordered_json canonical;
    std::optional<RawRates> raw;            // present when the file gave raw rates
    std::optional<Redimensionalized> redim; // derived parameters, ditto
};

/// Parse and validate a model description:
///
///   { "k": 5.0, "f": {"kind": "expr", "text": "k*R^2 + 2*k"} }
///   { "raw": {"mu": 0.1, "gamma": 0.4}, "f": {"kind": "constant", "beta_tilde": 12.0} }
///
/// Exactly one of "k" or "raw" must be present.  f kinds: "expr" (text),
/// "constant" (beta_tilde), "example1" (n, optional f0), "example2".  The
/// scenario kinds accept an optional nested "k" which must then match the
/// resolved top-level value.  All validation failures throw SpecError
/// before any computation happens.
LoadedModel load_model_json(const nlohmann::ordered_json& doc);

/// Same, reading the document from a file (throws SpecError when the file
/// is missing or not valid JSON).
LoadedModel load_model_file(const std::string& path);

} // namespace sirf
