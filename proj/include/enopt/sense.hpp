#pragma once

#include <string_view>

namespace enopt {

enum class Sense { LessEqual, Equal, GreaterEqual };

inline std::string_view to_string(Sense sense) {
  switch (sense) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "?";
}

}  // namespace enopt
