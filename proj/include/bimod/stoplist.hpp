#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>

namespace bimod {

using Stoplist = std::unordered_set<std::string>;

/// The SMART stop list (lowercase).
std::span<const std::string_view> smart_stoplist();

Stoplist default_stoplist();

/// One token per line; blank lines ignored; tokens are lowercased.
/// Throws DataError when the file cannot be read.
Stoplist load_stoplist(const std::filesystem::path& path);

}  // namespace bimod
