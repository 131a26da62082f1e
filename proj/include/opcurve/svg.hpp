#pragma once

#include <string>
#include <vector>

#include "opcurve/io.hpp"
#include "opcurve/offset_geometry.hpp"

namespace opcurve {

/// Renders curves as styled polylines and points as markers into a static
/// SVG with axes, tick labels and a legend. The viewport is fitted to the
/// data with a 5% margin. Output bytes are a pure function of the input.
void render_svg(const std::vector<NamedCurve>& curves,
                const std::vector<PlanarPoint>& points,
                const std::string& path);

} // namespace opcurve
