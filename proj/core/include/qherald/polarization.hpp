#pragma once

#include <string_view>

namespace qherald {

/// Linear polarization after the quarter-wave plates.
enum class Polarization { V, H };

/// Circular polarization of the cavity modes.
enum class Circular { L, R };

constexpr std::string_view to_string(Polarization p) { return p == Polarization::V ? "V" : "H"; }
constexpr std::string_view to_string(Circular c) { return c == Circular::L ? "L" : "R"; }

} // namespace qherald
