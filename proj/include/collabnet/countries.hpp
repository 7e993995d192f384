#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace collabnet {

/// Every code the corpus accepts, sorted: ISO 3166-1 alpha-2 plus the
/// legacy and user-assigned codes that bibliographic databases still emit.
std::span<const std::string_view> country_universe();

/// Uppercases, trims and resolves legacy aliases (UK -> GB, EL -> GR, ...).
/// Returns nullopt when the result is not in the universe.
std::optional<std::string> normalize_country(std::string_view code);

}  // namespace collabnet
