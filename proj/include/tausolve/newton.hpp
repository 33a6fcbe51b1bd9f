#pragma once

#include <cstdint>
#include <vector>

#include "tausolve/rational.hpp"

namespace tausolve {

/// Lower convex hull of (support index, valuation) points. A segment of slope
/// s and horizontal length l certifies l roots of valuation -s.
struct NewtonPolygon {
    struct Segment {
        Rat slope;
        Rat length; // integral at desk scale, kept rational per the data model
    };
    std::vector<Segment> segments;

    /// Root valuations with multiplicity, one entry per unit of length.
    std::vector<Rat> root_valuations() const {
        std::vector<Rat> out;
        for (auto& s : segments)
            for (std::int64_t i = 0; i < s.length.num() / s.length.den(); ++i)
                out.push_back(-s.slope);
        return out;
    }
};

/// Builds the polygon from support points; entries with infinite valuation
/// (zero coefficients) are ignored. Needs at least two finite points.
NewtonPolygon newton_polygon(const std::vector<std::pair<std::int64_t, Val>>& points);

} // namespace tausolve
