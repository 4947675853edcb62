#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace uim::model {

using Bindings = std::map<std::string, std::string, std::less<>>;

struct Substitution {
  std::string text;
  std::vector<std::string> unknown;  // names that had no binding
};

/// Expands `${name}` from bindings; `$$` is a literal `$`. Unknown names
/// expand to nothing and are listed in the result.
Substitution substitute(std::string_view template_text, const Bindings& bindings);

}  // namespace uim::model
