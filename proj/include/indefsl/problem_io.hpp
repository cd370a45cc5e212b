#pragma once

#include <string>
#include <string_view>

#include "indefsl/coeffs.hpp"

namespace indefsl {

/// Parses a JSON problem document, either
///   {"preset": "richardson", "mu": 8}
/// or
///   {"q": {"breakpoints": [...], "values": [...]},
///    "w": {"breakpoints": [...], "values": [...]}}.
/// An optional "ramp_half_width" is accepted with the preset. Unknown keys are
/// rejected. Throws InputError with a line number and field path on any violation.
Problem parse_problem(std::string_view doc);

/// Reads the file and calls parse_problem; the path is prefixed to diagnostics.
Problem load_problem(const std::string& path);

}  // namespace indefsl
