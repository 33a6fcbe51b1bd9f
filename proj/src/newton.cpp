#include "tausolve/newton.hpp"

#include <algorithm>

#include "tausolve/errors.hpp"

namespace tausolve {

NewtonPolygon newton_polygon(const std::vector<std::pair<std::int64_t, Val>>& points) {
    std::vector<std::pair<std::int64_t, Rat>> pts;
    for (auto& [i, v] : points)
        if (!v.is_inf()) pts.emplace_back(i, v.rat());
    std::sort(pts.begin(), pts.end());
    // keep the lowest valuation per support index
    std::vector<std::pair<std::int64_t, Rat>> uniq;
    for (auto& p : pts) {
        if (!uniq.empty() && uniq.back().first == p.first) continue;
        uniq.push_back(p);
    }
    if (uniq.size() < 2)
        fail(Err::DegenerateInput, "newton polygon needs at least two support points");

    // monotone chain, lower hull
    std::vector<std::pair<std::int64_t, Rat>> hull;
    for (auto& p : uniq) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // drop b if it lies on or above segment a-p
            Rat lhs = (b.second - a.second) * Rat(p.first - a.first);
            Rat rhs = (p.second - a.second) * Rat(b.first - a.first);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }

    NewtonPolygon np;
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        Rat dx = Rat(hull[i + 1].first - hull[i].first);
        Rat slope = (hull[i + 1].second - hull[i].second) / dx;
        np.segments.push_back({slope, dx});
    }
    return np;
}

} // namespace tausolve

