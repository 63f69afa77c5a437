#pragma once

#include <string>
#include <vector>

#include "tilesplit/engine.hpp"
#include "tilesplit/scheme.hpp"

namespace tilesplit {

enum class ColorBy { Type, Edge };

/// How a partition is drawn.
struct RenderSpec {
    ColorBy color_by = ColorBy::Type;
    double stroke_width = 1.0;
    /// Pixel length of the longer canvas side.
    unsigned canvas_px = 800;
    /// Upper bound on the total number of tiles across all rows; must be
    /// at least 1.
    std::size_t max_tiles = 1000000;
    /// Optional custom fill colors.  Indexed by prototile (Type) or by
    /// creating-edge id + 1 with 0 for the root tile (Edge), modulo the
    /// palette size.  Empty selects a built-in palette.
    std::vector<std::string> palette;
};

/// Draw one or more retained partition states as a single SVG document.
///
/// Two-dimensional schemes need a polygon outline on every prototile that
/// occurs; every tile becomes one <polygon>.  One-dimensional schemes become
/// bars of <rect> segments, one bar per row, stacked top to bottom (so a
/// sequence of snapshots reads like successive subdivisions of the same
/// interval).  Rows share one coordinate frame and one scale.
///
/// Throws Error for dimensions above 2, a missing outline, an empty row
/// list, or more than max_tiles tiles in total.
[[nodiscard]] std::string render_svg(const Scheme& s,
                                     const std::vector<std::vector<RetainedTile>>& rows,
                                     const RenderSpec& spec = {});

}  // namespace tilesplit
