#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mfid/fidelity.hpp"

namespace mfid {

/// Canonical structured form of a descriptor's gray box.
[[nodiscard]] nlohmann::json gray_box_json(const ModelDescriptor& model);

/// Checks a document against the gray-box layout; returns one message per
/// violation, empty when the document conforms.
[[nodiscard]] std::vector<std::string> gray_box_schema_errors(const nlohmann::json& doc);

}  // namespace mfid
