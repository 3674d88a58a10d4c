#pragma once

#include <span>
#include <vector>

namespace qtime {

struct Segment {
    double width;
    double height;

    bool operator==(const Segment&) const = default;
};

/// Piecewise-constant potential supported on [-d/2, d/2], zero outside.
/// Immutable after construction.
class BarrierProfile {
public:
    explicit BarrierProfile(std::vector<Segment> segments);

    std::span<const Segment> segments() const { return segments_; }
    double total_width() const { return width_; }
    double max_height() const { return max_height_; }
    bool parity_symmetric() const { return symmetric_; }

    BarrierProfile reversed() const;

    bool operator==(const BarrierProfile& other) const { return segments_ == other.segments_; }

private:
    std::vector<Segment> segments_;
    double width_ = 0.0;
    double max_height_ = 0.0;
    bool symmetric_ = false;
};

BarrierProfile square(double V0, double d);
BarrierProfile piecewise(std::vector<Segment> segments);

} // namespace qtime
