#pragma once

#include <string>

#include "cop/records.hpp"

namespace cop {

/// Loads a registry bundle: a directory holding one JSON file per collection
/// (datasets.json, problems.json, strategies.json, price_sheets.json,
/// expert_profiles.json, provider_configs.json, fx_rates.json). Field names
/// match the type definitions verbatim; money values may be JSON numbers or
/// decimal strings. Missing collection files load as empty.
Registry load_registry_bundle(const std::string& directory);

}  // namespace cop
