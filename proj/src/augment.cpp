#include "bovifuse/augment.hpp"

#include <cmath>
#include <string>

#include "bovifuse/errors.hpp"

namespace bovifuse {

namespace {

void check_interval(const Interval& iv, double lo, double hi, const char* name) {
  if (!(iv.lo <= iv.hi)) {
    throw ValidationError(std::string(name) + " interval has lo > hi");
  }
  if (iv.lo < lo || iv.hi > hi) {
    throw ValidationError(std::string(name) + " interval exceeds [" +
                          std::to_string(lo) + "," + std::to_string(hi) + "]");
  }
}

inline uint8_t clamp_round(double v) {
  long r = std::lround(v);
  return static_cast<uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
}

}  // namespace

AugmentSpec AugmentSpec::identity() {
  AugmentSpec s;
  s.rotation_deg = {0.0, 0.0};
  s.width_shift = {0.0, 0.0};
  s.height_shift = {0.0, 0.0};
  s.zoom = {1.0, 1.0};
  s.brightness = {1.0, 1.0};
  s.channel_shift = {0.0, 0.0};
  return s;
}

void AugmentSpec::validate() const {
  check_interval(rotation_deg, -35.0, 35.0, "rotation_deg");
  check_interval(width_shift, 0.0, 0.3, "width_shift");
  check_interval(height_shift, 0.0, 0.3, "height_shift");
  check_interval(zoom, 0.7, 1.3, "zoom");
  check_interval(brightness, 0.6, 1.4, "brightness");
  check_interval(channel_shift, 0.0, 60.0, "channel_shift");
}

ImageBuffer augment(const ImageBuffer& img, const AugmentSpec& spec, Rng& rng) {
  spec.validate();
  const auto& src = img.bytes();
  const int w = img.width(), h = img.height();

  // Fixed draw order; every call consumes exactly eight values.
  const double theta_deg = rng.uniform(spec.rotation_deg.lo, spec.rotation_deg.hi);
  const double shift_x = rng.uniform(spec.width_shift.lo, spec.width_shift.hi) * w;
  const double shift_y = rng.uniform(spec.height_shift.lo, spec.height_shift.hi) * h;
  const double zoom = rng.uniform(spec.zoom.lo, spec.zoom.hi);
  const double brightness = rng.uniform(spec.brightness.lo, spec.brightness.hi);
  double channel_delta[3];
  for (double& d : channel_delta) {
    d = rng.uniform(spec.channel_shift.lo, spec.channel_shift.hi);
  }

  const double theta = theta_deg * M_PI / 180.0;
  const double cos_t = std::cos(theta), sin_t = std::sin(theta);
  const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;

  // Forward map: q = zoom * R(p - c) + zoom * t + c. Evaluated inverse:
  // p = R^-1((q - c) / zoom - t) + c, sampled bilinearly with edge clamp.
  auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };
  std::vector<uint8_t> dst(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double ux = (x - cx) / zoom - shift_x;
      double uy = (y - cy) / zoom - shift_y;
      double px = cos_t * ux + sin_t * uy + cx;
      double py = -sin_t * ux + cos_t * uy + cy;

      int x0 = static_cast<int>(std::floor(px));
      int y0 = static_cast<int>(std::floor(py));
      double fx = px - x0, fy = py - y0;
      int xa = clampi(x0, w - 1), xb = clampi(x0 + 1, w - 1);
      int ya = clampi(y0, h - 1), yb = clampi(y0 + 1, h - 1);
      for (int c = 0; c < ImageBuffer::kChannels; ++c) {
        double top = (1.0 - fx) * src[(static_cast<size_t>(ya) * w + xa) * 3 + c] +
                     fx * src[(static_cast<size_t>(ya) * w + xb) * 3 + c];
        double bot = (1.0 - fx) * src[(static_cast<size_t>(yb) * w + xa) * 3 + c] +
                     fx * src[(static_cast<size_t>(yb) * w + xb) * 3 + c];
        dst[(static_cast<size_t>(y) * w + x) * 3 + c] =
            clamp_round((1.0 - fy) * top + fy * bot);
      }
    }
  }

  // Photometric stages run on 8-bit values so each stage stays in range.
  for (size_t i = 0; i < dst.size(); ++i) {
    uint8_t lit = clamp_round(dst[i] * brightness);
    dst[i] = clamp_round(lit + channel_delta[i % 3]);
  }
  return ImageBuffer::u8(w, h, std::move(dst));
}

ImageBuffer augment(const ImageBuffer& img, const AugmentSpec& spec, uint64_t seed) {
  Rng rng(seed);
  return augment(img, spec, rng);
}

}  // namespace bovifuse
