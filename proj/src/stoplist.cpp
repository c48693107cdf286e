#include "bimod/stoplist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "bimod/error.hpp"

namespace bimod {

Stoplist default_stoplist() {
  Stoplist out;
  for (std::string_view w : smart_stoplist()) out.emplace(w);
  return out;
}

Stoplist load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read stoplist " + path.string());
  Stoplist out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    std::string word = line.substr(first, last - first + 1);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.insert(std::move(word));
  }
  return out;
}

}  // namespace bimod
