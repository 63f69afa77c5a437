#include "tilesplit/render.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tilesplit/util.hpp"

namespace tilesplit {

namespace {

const char* const kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

struct BBox {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
};

/// The outline of a prototile in its own coordinates.  One-dimensional
/// prototiles fall back to the interval [0, volume].
std::vector<std::vector<double>> outline_of(const Scheme& s, std::size_t type) {
    const Prototile& p = s.prototiles[type];
    if (!p.polygon.empty()) return p.polygon;
    if (s.dimension == 1) return {{0.0}, {p.volume.to_double()}};
    throw Error("prototile '" + p.label + "' has no outline geometry to render");
}

std::string fill_of(const RenderSpec& spec, const RetainedTile& t) {
    const std::size_t index = spec.color_by == ColorBy::Type ? t.tile.type : t.entry;
    if (!spec.palette.empty()) return spec.palette[index % spec.palette.size()];
    return kPalette[index % kPaletteSize];
}

}  // namespace

std::string render_svg(const Scheme& s, const std::vector<std::vector<RetainedTile>>& rows,
                       const RenderSpec& spec) {
    if (spec.max_tiles < 1) throw Error("render tile budget must be at least 1");
    if (s.dimension > 2)
        throw Error("rendering supports 1- and 2-dimensional schemes only, not dimension " +
                    std::to_string(s.dimension));
    std::size_t total = 0;
    for (const auto& row : rows) total += row.size();
    if (rows.empty() || total == 0) throw Error("nothing to render: no tiles given");
    if (total > spec.max_tiles)
        throw Error("refusing to render " + std::to_string(total) + " tiles (budget " +
                    std::to_string(spec.max_tiles) + ")");

    // Transform every outline once and take a bounding box shared by all
    // rows, so stacked rows stay mutually comparable.
    struct Shape {
        std::size_t row = 0;
        std::vector<std::vector<double>> pts;
        std::string fill;
    };
    std::vector<Shape> shapes;
    shapes.reserve(total);
    BBox box;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const RetainedTile& t : rows[r]) {
            Shape sh;
            sh.row = r;
            sh.fill = fill_of(spec, t);
            for (const auto& v : outline_of(s, t.tile.type)) {
                std::vector<double> p = t.tile.placement.apply(v, s.dimension);
                box.add(p[0], s.dimension == 2 ? p[1] : 0.0);
                sh.pts.push_back(std::move(p));
            }
            shapes.push_back(std::move(sh));
        }
    }

    const double spanx = std::max(box.xmax - box.xmin, 1e-12);
    const double spany = s.dimension == 2 ? std::max(box.ymax - box.ymin, 1e-12) : 0.0;
    const double margin = 0.02 * spec.canvas_px;
    const double inner = spec.canvas_px - 2.0 * margin;

    std::ostringstream svg;
    svg.setf(std::ios::fixed);

    if (s.dimension == 2) {
        // One drawing per row, stacked with a small gap, every row at the
        // same scale; y flipped so the mathematical orientation is kept.
        const double scale = inner / std::max(spanx, spany);
        const double roww = spanx * scale;
        const double rowh = spany * scale;
        const double gap = 0.04 * spec.canvas_px;
        const double width = roww + 2.0 * margin;
        const double height = margin + rows.size() * (rowh + gap) - gap + margin;
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
            << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " "
            << fmt(height) << "\">\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            svg << "<g class=\"row\" id=\"row" << r << "\">\n";
            const double y0 = margin + r * (rowh + gap);
            for (const Shape& sh : shapes) {
                if (sh.row != r) continue;
                svg << "<polygon points=\"";
                for (std::size_t i = 0; i < sh.pts.size(); ++i) {
                    const double x = margin + (sh.pts[i][0] - box.xmin) * scale;
                    const double y = y0 + (box.ymax - sh.pts[i][1]) * scale;
                    svg << (i ? " " : "") << fmt(x) << "," << fmt(y);
                }
                svg << "\" fill=\"" << sh.fill << "\" stroke=\"#000000\" stroke-width=\""
                    << fmt(spec.stroke_width) << "\"/>\n";
            }
            svg << "</g>\n";
        }
        svg << "</svg>\n";
        return svg.str();
    }

    // One-dimensional: each row is a bar of segments.
    const double scale = inner / spanx;
    const double rowh = std::max(12.0, 0.05 * spec.canvas_px);
    const double gap = 0.4 * rowh;
    const double width = spec.canvas_px;
    const double height = margin + rows.size() * (rowh + gap) - gap + margin;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        svg << "<g class=\"row\" id=\"row" << r << "\">\n";
        const double y0 = margin + r * (rowh + gap);
        for (const Shape& sh : shapes) {
            if (sh.row != r) continue;
            double lo = sh.pts[0][0], hi = sh.pts[0][0];
            for (const auto& p : sh.pts) {
                lo = std::min(lo, p[0]);
                hi = std::max(hi, p[0]);
            }
            const double x = margin + (lo - box.xmin) * scale;
            svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y0) << "\" width=\""
                << fmt((hi - lo) * scale) << "\" height=\"" << fmt(rowh) << "\" fill=\""
                << sh.fill << "\" stroke=\"#000000\" stroke-width=\"" << fmt(spec.stroke_width)
                << "\"/>\n";
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace tilesplit
