#include "rediv/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rediv {

namespace {

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
                          "#edc948", "#76b7b2", "#ff9da7", "#9c755f", "#bab0ac"};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// 1-D pieces are drawn as strips of height 1
std::vector<std::vector<Pt>> outlines(const PieceRegion& p) {
    if (const Interval* iv = std::get_if<Interval>(&p))
        return {{{iv->lo, 0}, {iv->hi, 0}, {iv->hi, 1}, {iv->lo, 1}}};
    if (const IntervalUnion* u = std::get_if<IntervalUnion>(&p)) {
        std::vector<std::vector<Pt>> out;
        for (const Interval& iv : u->parts)
            out.push_back({{iv.lo, 0}, {iv.hi, 0}, {iv.hi, 1}, {iv.lo, 1}});
        return out;
    }
    if (const Rect* r = std::get_if<Rect>(&p))
        return {{{r->xlo, r->ylo}, {r->xhi, r->ylo}, {r->xhi, r->yhi}, {r->xlo, r->yhi}}};
    if (const ConvexPolygon* c = std::get_if<ConvexPolygon>(&p)) return {c->v};
    return {std::get<RectilinearPolygon>(p).v};
}

Rect bounds(const PieceRegion& p) {
    if (is_1d(p)) {
        IntervalUnion u = std::holds_alternative<Interval>(p)
                              ? IntervalUnion::of({std::get<Interval>(p)})
                              : std::get<IntervalUnion>(p);
        if (u.empty()) return {0, 1, 0, 1};
        return {u.parts.front().lo, u.parts.back().hi, 0, 1};
    }
    return piece_bbox(p);
}

// screen coordinates: y grows downward
std::string poly_points(const std::vector<Pt>& pts, double ymax) {
    std::ostringstream os;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) os << " ";
        os << num(to_double(pts[i].x)) << "," << num(ymax - to_double(pts[i].y));
    }
    return os.str();
}

}  // namespace

std::string render_svg(const PieceRegion& cake, const std::vector<SvgLayer>& layers) {
    Rect bb = bounds(cake);
    double x0 = to_double(bb.xlo), x1 = to_double(bb.xhi);
    double y0 = to_double(bb.ylo), y1 = to_double(bb.yhi);
    double margin = 0.05 * std::max(x1 - x0, y1 - y0);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(x0 - margin) << " "
       << num(-margin) << " " << num(x1 - x0 + 2 * margin) << " " << num(y1 - y0 + 2 * margin)
       << "\">\n";
    os << "<defs><pattern id=\"blank\" width=\"0.2\" height=\"0.2\" "
          "patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">"
          "<rect width=\"0.2\" height=\"0.2\" fill=\"#eeeeee\"/>"
          "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"0.2\" stroke=\"#999999\" "
          "stroke-width=\"0.05\"/></pattern></defs>\n";
    for (const std::vector<Pt>& loop : outlines(cake))
        os << "<polygon points=\"" << poly_points(loop, y1) << "\" fill=\"#ffffff\" "
           << "stroke=\"#000000\" stroke-width=\"0.03\"/>\n";
    size_t color = 0;
    for (const SvgLayer& layer : layers) {
        std::string fill =
            layer.blank ? "url(#blank)" : kPalette[color++ % (sizeof kPalette / sizeof *kPalette)];
        for (const std::vector<Pt>& loop : outlines(layer.piece))
            os << "<polygon points=\"" << poly_points(loop, y1) << "\" fill=\"" << fill
               << "\" fill-opacity=\"0.75\" stroke=\"#333333\" stroke-width=\"0.02\"/>\n";
        if (!layer.label.empty()) {
            Rect pb = bounds(layer.piece);
            double cx = (to_double(pb.xlo) + to_double(pb.xhi)) / 2;
            double cy = y1 - (to_double(pb.ylo) + to_double(pb.yhi)) / 2;
            os << "<text x=\"" << num(cx) << "\" y=\"" << num(cy)
               << "\" font-size=\"0.3\" text-anchor=\"middle\">" << layer.label << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const std::string& svg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << svg;
}

}  // namespace rediv
