#pragma once

#include <string>
#include <string_view>

namespace bimod {

/// Porter (1980) suffix-stripping stemmer for lowercase English words,
/// following the reference C implementation. Words of two letters or
/// fewer, and words with non a-z characters, are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace bimod
