#pragma once

#include <json.hpp>

#include "lotkarank/corpus.hpp"

namespace lotkarank::detail {

// Shared by the corpus reader and index persistence. Throws std::invalid_argument
// describing the first offending key.
DocumentRecord record_from_json(const nlohmann::json& obj);
nlohmann::ordered_json record_to_json(const DocumentRecord& doc);

}  // namespace lotkarank::detail
