#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "torus_rh/model_rh.hpp"

namespace torus_rh::cli {

enum ExitCode : int { exit_pass = 0, exit_usage = 1, exit_domain = 2, exit_internal = 3 };

// A parsed point literal: "re,im", "0+,y" / "0-,y" for a contour side, or
// "inf+" / "inf-" for infinity on the upper / lower sheet.
using PointLiteral = std::variant<cplx, BoundaryPoint, InfinityPoint>;

// Throws Error(invalid_argument) on malformed input.
PointLiteral parse_point(const std::string& text);

// args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torus_rh::cli
