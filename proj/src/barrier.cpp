#include "qtime/barrier.hpp"

#include <algorithm>
#include <cmath>

#include "qtime/errors.hpp"

namespace qtime {

BarrierProfile::BarrierProfile(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
        throw InputError("barrier needs at least one segment");
    }
    for (const auto& s : segments_) {
        if (!std::isfinite(s.width) || !std::isfinite(s.height)) {
            throw InputError("barrier segment values must be finite");
        }
        if (s.width <= 0.0) {
            throw InputError("barrier segment widths must be positive");
        }
        if (s.height < 0.0) {
            throw InputError("barrier heights must be non-negative");
        }
        width_ += s.width;
        max_height_ = std::max(max_height_, s.height);
    }
    symmetric_ = std::equal(segments_.begin(), segments_.end(), segments_.rbegin());
}

BarrierProfile BarrierProfile::reversed() const {
    return BarrierProfile({segments_.rbegin(), segments_.rend()});
}

BarrierProfile square(double V0, double d) {
    if (!(V0 > 0.0) || !(d > 0.0)) {
        throw InputError("square barrier needs V0 > 0 and d > 0");
    }
    return BarrierProfile({{d, V0}});
}

BarrierProfile piecewise(std::vector<Segment> segments) {
    return BarrierProfile(std::move(segments));
}

} // namespace qtime
