#pragma once

#include "bovifuse/image.hpp"

namespace bovifuse {

/// Fraction of pixels marked as edges by a Canny detector:
/// luma grayscale -> 5x5 Gaussian blur (sigma 1.4) -> Sobel gradients ->
/// non-maximum suppression -> double-threshold hysteresis with
/// high = 0.3 * max magnitude and low = 0.1 * max magnitude.
///
/// Used as a screening signal: images far below a typical density are
/// unlikely to contain a subject. Requires an 8-bit image of at least 5x5.
double canny_edge_density(const ImageBuffer& img);

}  // namespace bovifuse
