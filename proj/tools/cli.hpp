#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cogrates/region_geometry.hpp"

namespace cogrates::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitParse = 4;

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SvgCurve {
  std::string label;
  std::vector<RatePair> points;
};

struct SvgMarker {
  std::string label;
  RatePair point;
};

// Boundary polyline of a downward-closed region, closed down to the R1 axis.
SvgCurve envelope_curve(const std::string& label, const Envelope& e);

// 800x600 polyline plot with axes in bits and one label per curve.
std::string render_svg(const std::string& title, const std::vector<SvgCurve>& curves,
                       const std::vector<SvgMarker>& markers = {});

}  // namespace cogrates::cli
