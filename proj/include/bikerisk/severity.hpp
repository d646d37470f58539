#pragma once

#include <array>
#include <string>
#include <string_view>

namespace bikerisk {

enum class Severity { Light = 0, Severe = 1, Death = 2 };

inline constexpr std::array<Severity, 3> kAllSeverities = {Severity::Light, Severity::Severe,
                                                           Severity::Death};

std::string_view to_string(Severity s);

}  // namespace bikerisk
