#pragma once

#include "bovifuse/image.hpp"
#include "bovifuse/rng.hpp"

namespace bovifuse {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Sampling ranges for the augmentation parameters. Each interval must lie
/// inside the supported envelope: rotation [-35,35] degrees, shifts
/// [0,0.3] of the image dimension, zoom [0.7,1.3], brightness [0.6,1.4],
/// channel shift [0,60] intensity levels.
struct AugmentSpec {
  Interval rotation_deg{-35.0, 35.0};
  Interval width_shift{0.0, 0.3};
  Interval height_shift{0.0, 0.3};
  Interval zoom{0.7, 1.3};
  Interval brightness{0.6, 1.4};
  Interval channel_shift{0.0, 60.0};

  /// Degenerate intervals that make augment() a pixel-exact no-op.
  static AugmentSpec identity();

  void validate() const;
};

/// Applies one random augmentation draw:
///   rotation about the image center, translation by (s_w*W, s_h*H), zoom
///   about the center -- composed into a single affine map and evaluated by
///   inverse mapping with bilinear sampling and nearest-edge fill -- then
///   multiplicative brightness (clamped) and an additive per-channel shift
///   (clamped).
///
/// Parameters are drawn from the spec intervals in a fixed order (rotation,
/// width shift, height shift, zoom, brightness, then the three channel
/// shifts), so a given generator state always produces the same image.
/// Output dimensions equal input dimensions.
ImageBuffer augment(const ImageBuffer& img, const AugmentSpec& spec, Rng& rng);

ImageBuffer augment(const ImageBuffer& img, const AugmentSpec& spec, uint64_t seed);

}  // namespace bovifuse
