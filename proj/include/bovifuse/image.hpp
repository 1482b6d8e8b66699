#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace bovifuse {

enum class PixelDepth { U8, F32 };

/// Interleaved RGB image. Either 8-bit samples in [0,255] or normalized
/// 32-bit floats in [0,1]; the depth flag says which, and ops that require
/// one depth reject the other.
class ImageBuffer {
 public:
  static constexpr int kChannels = 3;

  static ImageBuffer u8(int width, int height);
  static ImageBuffer u8(int width, int height, std::vector<uint8_t> data);
  static ImageBuffer f32(int width, int height, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  PixelDepth depth() const { return depth_; }
  size_t sample_count() const {
    return static_cast<size_t>(width_) * static_cast<size_t>(height_) * kChannels;
  }

  const std::vector<uint8_t>& bytes() const;
  std::vector<uint8_t>& bytes();
  const std::vector<float>& floats() const;
  std::vector<float>& floats();

  uint8_t at(int x, int y, int c) const {
    return bytes()[(static_cast<size_t>(y) * width_ + x) * kChannels + c];
  }
  void set(int x, int y, int c, uint8_t v) {
    bytes()[(static_cast<size_t>(y) * width_ + x) * kChannels + c] = v;
  }

  bool operator==(const ImageBuffer&) const = default;

 private:
  ImageBuffer() = default;
  int width_ = 0;
  int height_ = 0;
  PixelDepth depth_ = PixelDepth::U8;
  std::vector<uint8_t> u8_;
  std::vector<float> f32_;
};

/// Bilinear resize with the half-pixel-center sampling convention:
/// src_x = (dst_x + 0.5) * (in_w / out_w) - 0.5, taps clamped to the edge.
/// Resizing to the input dimensions reproduces the input bit for bit.
ImageBuffer resize_bilinear(const ImageBuffer& img, int out_w, int out_h);

/// 8-bit -> normalized floats (sample / 255). Normalizing an already
/// normalized image is an error.
ImageBuffer normalize(const ImageBuffer& img);

/// Peak signal-to-noise ratio in dB over all samples of two same-sized
/// 8-bit images: 10*log10(255^2 / MSE). Identical images give +infinity.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

// --- codecs ---

std::vector<uint8_t> encode_ppm(const ImageBuffer& img);
ImageBuffer decode_ppm(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_png(const ImageBuffer& img);
ImageBuffer decode_png(const std::vector<uint8_t>& bytes);

/// Reads a PNG or binary PPM (P6), sniffing the magic bytes.
ImageBuffer read_image(const std::filesystem::path& path);
void write_png(const ImageBuffer& img, const std::filesystem::path& path);
void write_ppm(const ImageBuffer& img, const std::filesystem::path& path);

/// Sidecar tensor file for normalized images: magic "HF01", then width,
/// height, channels as little-endian u32, then row-major f32 samples.
void write_tensor_file(const ImageBuffer& img, const std::filesystem::path& path);
ImageBuffer read_tensor_file(const std::filesystem::path& path);

}  // namespace bovifuse
