#include "bikerisk/severity.hpp"

namespace bikerisk {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Light:
      return "light";
    case Severity::Severe:
      return "severe";
    case Severity::Death:
      return "death";
  }
  return "unknown";
}

}  // namespace bikerisk
