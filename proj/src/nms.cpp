#include "pedscan/nms.hpp"

#include <algorithm>
#include <tuple>

#include "pedscan/errors.hpp"

namespace pedscan {

double detection_iou(const Detection& a, const Detection& b) {
    const long ix0 = std::max(a.x, b.x);
    const long iy0 = std::max(a.y, b.y);
    const long ix1 = std::min(a.x + a.width, b.x + b.width);
    const long iy1 = std::min(a.y + a.height, b.y + b.height);
    const long iw = ix1 - ix0;
    const long ih = iy1 - iy0;
    if (iw <= 0 || ih <= 0) return 0.0;
    const double inter = static_cast<double>(iw) * static_cast<double>(ih);
    const double uni = static_cast<double>(a.width) * static_cast<double>(a.height) +
                       static_cast<double>(b.width) * static_cast<double>(b.height) - inter;
    return inter / uni;
}

std::vector<Detection> nms_greedy(std::vector<Detection> detections, double overlap_threshold) {
    if (overlap_threshold <= 0.0 || overlap_threshold >= 1.0)
        throw DimensionError("nms_greedy: overlap_threshold must be in (0, 1)");
    std::sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
        if (a.score != b.score) return a.score > b.score;
        return std::tie(a.y, a.x, a.level) < std::tie(b.y, b.x, b.level);
    });
    std::vector<Detection> kept;
    for (const auto& candidate : detections) {
        bool suppressed = false;
        for (const auto& winner : kept)
            if (detection_iou(candidate, winner) > overlap_threshold) {
                suppressed = true;
                break;
            }
        if (!suppressed) kept.push_back(candidate);
    }
    return kept;
}

}  // namespace pedscan
