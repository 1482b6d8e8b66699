#include "bovifuse/canny.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "bovifuse/errors.hpp"

namespace bovifuse {

namespace {

constexpr double kHighRatio = 0.3;
constexpr double kLowRatio = 0.1;
constexpr double kSigma = 1.4;

std::array<double, 25> gaussian_kernel_5x5(double sigma) {
  std::array<double, 25> k{};
  double sum = 0.0;
  for (int y = -2; y <= 2; ++y) {
    for (int x = -2; x <= 2; ++x) {
      double v = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      k[static_cast<size_t>((y + 2) * 5 + (x + 2))] = v;
      sum += v;
    }
  }
  for (double& v : k) v /= sum;
  return k;
}

inline int clampi(int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); }

}  // namespace

double canny_edge_density(const ImageBuffer& img) {
  const int w = img.width(), h = img.height();
  if (w < 5 || h < 5) {
    throw ValidationError("canny_edge_density requires an image of at least 5x5");
  }
  const auto& rgb = img.bytes();

  // Luma grayscale.
  std::vector<double> gray(static_cast<size_t>(w) * h);
  for (size_t i = 0; i < gray.size(); ++i) {
    gray[i] = 0.299 * rgb[i * 3] + 0.587 * rgb[i * 3 + 1] + 0.114 * rgb[i * 3 + 2];
  }

  // Gaussian blur, edges clamped.
  const auto kernel = gaussian_kernel_5x5(kSigma);
  std::vector<double> blur(gray.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int ky = -2; ky <= 2; ++ky) {
        int yy = clampi(y + ky, h - 1);
        for (int kx = -2; kx <= 2; ++kx) {
          int xx = clampi(x + kx, w - 1);
          acc += kernel[static_cast<size_t>((ky + 2) * 5 + (kx + 2))] *
                 gray[static_cast<size_t>(yy) * w + xx];
        }
      }
      blur[static_cast<size_t>(y) * w + x] = acc;
    }
  }

  // Sobel gradients.
  std::vector<double> mag(gray.size()), dir(gray.size());
  double max_mag = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto px = [&](int dx, int dy) {
        return blur[static_cast<size_t>(clampi(y + dy, h - 1)) * w + clampi(x + dx, w - 1)];
      };
      double gx = -px(-1, -1) - 2 * px(-1, 0) - px(-1, 1) + px(1, -1) + 2 * px(1, 0) +
                  px(1, 1);
      double gy = -px(-1, -1) - 2 * px(0, -1) - px(1, -1) + px(-1, 1) + 2 * px(0, 1) +
                  px(1, 1);
      size_t i = static_cast<size_t>(y) * w + x;
      mag[i] = std::hypot(gx, gy);
      dir[i] = std::atan2(gy, gx);
      if (mag[i] > max_mag) max_mag = mag[i];
    }
  }
  if (max_mag <= 0.0) return 0.0;

  // Non-maximum suppression along the quantized gradient direction.
  std::vector<double> thin(gray.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      size_t i = static_cast<size_t>(y) * w + x;
      double angle = dir[i] * 180.0 / M_PI;
      if (angle < 0) angle += 180.0;
      int dx = 1, dy = 0;
      if (angle >= 22.5 && angle < 67.5) {
        dx = 1;
        dy = -1;
      } else if (angle >= 67.5 && angle < 112.5) {
        dx = 0;
        dy = 1;
      } else if (angle >= 112.5 && angle < 157.5) {
        dx = 1;
        dy = 1;
      }
      double a = mag[static_cast<size_t>(clampi(y + dy, h - 1)) * w + clampi(x + dx, w - 1)];
      double b = mag[static_cast<size_t>(clampi(y - dy, h - 1)) * w + clampi(x - dx, w - 1)];
      if (mag[i] >= a && mag[i] >= b) thin[i] = mag[i];
    }
  }

  const double high = kHighRatio * max_mag;
  const double low = kLowRatio * max_mag;

  // Hysteresis: strong pixels seed a flood fill through weak ones.
  std::vector<uint8_t> edge(gray.size(), 0);
  std::vector<size_t> stack;
  for (size_t i = 0; i < thin.size(); ++i) {
    if (thin[i] > high) {
      edge[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    size_t i = stack.back();
    stack.pop_back();
    int x = static_cast<int>(i % static_cast<size_t>(w));
    int y = static_cast<int>(i / static_cast<size_t>(w));
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        size_t j = static_cast<size_t>(ny) * w + nx;
        if (!edge[j] && thin[j] > low) {
          edge[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }

  size_t count = 0;
  for (uint8_t e : edge) count += e;
  return static_cast<double>(count) / static_cast<double>(edge.size());
}

}  // namespace bovifuse
