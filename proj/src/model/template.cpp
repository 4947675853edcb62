#include "uim/model/template.hpp"

namespace uim::model {

Substitution substitute(std::string_view text, const Bindings& bindings) {
  Substitution out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '$' || i + 1 >= text.size()) {
      out.text += c;
      ++i;
      continue;
    }
    if (text[i + 1] == '$') {
      out.text += '$';
      i += 2;
      continue;
    }
    if (text[i + 1] == '{') {
      const auto close = text.find('}', i + 2);
      if (close != std::string_view::npos) {
        const auto name = text.substr(i + 2, close - i - 2);
        if (auto it = bindings.find(name); it != bindings.end()) {
          out.text += it->second;
        } else {
          out.unknown.emplace_back(name);
        }
        i = close + 1;
        continue;
      }
    }
    out.text += c;
    ++i;
  }
  return out;
}

}  // namespace uim::model
