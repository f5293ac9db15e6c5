#pragma once

#include <vector>

#include "pedscan/svm.hpp"

namespace pedscan {

/// Intersection-over-union of two detection rectangles.
double detection_iou(const Detection& a, const Detection& b);

/// Greedy score-ordered suppression: keep the best remaining detection,
/// drop everything overlapping it beyond overlap_threshold. Ties on score
/// break by (y, x, level). Output sorted by descending score.
std::vector<Detection> nms_greedy(std::vector<Detection> detections,
                                  double overlap_threshold = 0.5);

}  // namespace pedscan
