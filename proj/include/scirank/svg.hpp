#ifndef SCIRANK_SVG_HPP
#define SCIRANK_SVG_HPP

#include <string>

#include "scirank/io.hpp"

namespace scirank::svg {

/// Scatter of the report's plane on a fixed 800x600 canvas. Active rows are
/// filled circles, active columns filled squares, supplementary points
/// hollow with italic labels; axis titles carry their inertia shares.
std::string ca_plane(const io::CaReport& report);

}  // namespace scirank::svg

#endif  // SCIRANK_SVG_HPP
