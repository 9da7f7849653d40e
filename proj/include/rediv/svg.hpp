#pragma once

#include <string>
#include <vector>

#include "rediv/geometry.hpp"

namespace rediv {

struct SvgLayer {
    PieceRegion piece;
    std::string label;
    bool blank = false;  // blanks are hatched
};

// Deterministic SVG of a cake with colored pieces; identical input yields a
// byte-identical document.
std::string render_svg(const PieceRegion& cake, const std::vector<SvgLayer>& layers);

void write_svg(const std::string& svg, const std::string& path);

}  // namespace rediv
