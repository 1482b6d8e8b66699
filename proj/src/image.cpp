#include "bovifuse/image.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstring>
#include <limits>
#include <string>

#include "bovifuse/errors.hpp"
#include "bovifuse/fsio.hpp"

namespace bovifuse {

namespace {

size_t expected_samples(int w, int h) {
  return static_cast<size_t>(w) * static_cast<size_t>(h) * ImageBuffer::kChannels;
}

void require_dims(int w, int h) {
  if (w < 1 || h < 1) throw ValidationError("image dimensions must be >= 1");
}

}  // namespace

ImageBuffer ImageBuffer::u8(int width, int height) {
  return u8(width, height, std::vector<uint8_t>(expected_samples(width, height), 0));
}

ImageBuffer ImageBuffer::u8(int width, int height, std::vector<uint8_t> data) {
  require_dims(width, height);
  if (data.size() != expected_samples(width, height)) {
    throw ValidationError("image data length does not match width*height*3");
  }
  ImageBuffer img;
  img.width_ = width;
  img.height_ = height;
  img.depth_ = PixelDepth::U8;
  img.u8_ = std::move(data);
  return img;
}

ImageBuffer ImageBuffer::f32(int width, int height, std::vector<float> data) {
  require_dims(width, height);
  if (data.size() != expected_samples(width, height)) {
    throw ValidationError("image data length does not match width*height*3");
  }
  for (float v : data) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw ValidationError("normalized image samples must lie in [0,1]");
    }
  }
  ImageBuffer img;
  img.width_ = width;
  img.height_ = height;
  img.depth_ = PixelDepth::F32;
  img.f32_ = std::move(data);
  return img;
}

const std::vector<uint8_t>& ImageBuffer::bytes() const {
  if (depth_ != PixelDepth::U8) throw ValidationError("image is not 8-bit");
  return u8_;
}

std::vector<uint8_t>& ImageBuffer::bytes() {
  if (depth_ != PixelDepth::U8) throw ValidationError("image is not 8-bit");
  return u8_;
}

const std::vector<float>& ImageBuffer::floats() const {
  if (depth_ != PixelDepth::F32) throw ValidationError("image is not normalized");
  return f32_;
}

std::vector<float>& ImageBuffer::floats() {
  if (depth_ != PixelDepth::F32) throw ValidationError("image is not normalized");
  return f32_;
}

ImageBuffer resize_bilinear(const ImageBuffer& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw ValidationError("resize target must be >= 1x1");
  const std::vector<uint8_t>& src = img.bytes();
  const int in_w = img.width(), in_h = img.height();

  std::vector<uint8_t> dst(expected_samples(out_w, out_h));
  const double sx = static_cast<double>(in_w) / out_w;
  const double sy = static_cast<double>(in_h) / out_h;

  auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };

  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double wy = fy - y0;
    int ya = clampi(y0, in_h - 1);
    int yb = clampi(y0 + 1, in_h - 1);
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double wx = fx - x0;
      int xa = clampi(x0, in_w - 1);
      int xb = clampi(x0 + 1, in_w - 1);
      for (int c = 0; c < ImageBuffer::kChannels; ++c) {
        double top = (1.0 - wx) * src[(static_cast<size_t>(ya) * in_w + xa) * 3 + c] +
                     wx * src[(static_cast<size_t>(ya) * in_w + xb) * 3 + c];
        double bot = (1.0 - wx) * src[(static_cast<size_t>(yb) * in_w + xa) * 3 + c] +
                     wx * src[(static_cast<size_t>(yb) * in_w + xb) * 3 + c];
        double v = (1.0 - wy) * top + wy * bot;
        long r = std::lround(v);
        dst[(static_cast<size_t>(y) * out_w + x) * 3 + c] =
            static_cast<uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
      }
    }
  }
  return ImageBuffer::u8(out_w, out_h, std::move(dst));
}

ImageBuffer normalize(const ImageBuffer& img) {
  if (img.depth() == PixelDepth::F32) {
    throw ValidationError("image is already normalized");
  }
  const auto& src = img.bytes();
  std::vector<float> out(src.size());
  for (size_t i = 0; i < src.size(); ++i) {
    out[i] = static_cast<float>(src[i]) / 255.0f;
  }
  return ImageBuffer::f32(img.width(), img.height(), std::move(out));
}

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ValidationError("psnr requires images of identical dimensions");
  }
  const auto& pa = a.bytes();
  const auto& pb = b.bytes();
  double sq = 0.0;
  for (size_t i = 0; i < pa.size(); ++i) {
    double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
    sq += d * d;
  }
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  double mse = sq / static_cast<double>(pa.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

// --- PPM (P6, maxval 255) ---

std::vector<uint8_t> encode_ppm(const ImageBuffer& img) {
  const auto& data = img.bytes();
  std::string header = "P6\n" + std::to_string(img.width()) + " " +
                       std::to_string(img.height()) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

ImageBuffer decode_ppm(const std::vector<uint8_t>& bytes) {
  size_t pos = 0;
  auto skip_space = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_space();
    long v = 0;
    bool any = false;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      ++pos;
      any = true;
    }
    if (!any) throw ParseError("", "", "truncated PPM header");
    return v;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw ParseError("", "", "not a binary PPM (P6) file");
  }
  pos = 2;
  long w = read_int(), h = read_int(), maxval = read_int();
  if (maxval != 255) throw ParseError("", "", "only maxval 255 PPM supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw ParseError("", "", "malformed PPM header");
  }
  ++pos;  // single whitespace after maxval
  size_t need = expected_samples(static_cast<int>(w), static_cast<int>(h));
  if (bytes.size() - pos < need) throw ParseError("", "", "truncated PPM pixel data");
  std::vector<uint8_t> data(bytes.begin() + static_cast<long>(pos),
                            bytes.begin() + static_cast<long>(pos + need));
  return ImageBuffer::u8(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

// --- PNG via libpng ---

namespace {

struct PngReadState {
  const uint8_t* data;
  size_t size;
  size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->pos + n > st->size) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, st->data + st->pos, n);
  st->pos += n;
}

void png_mem_write(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void png_mem_flush(png_structp) {}

}  // namespace

ImageBuffer decode_png(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw ParseError("", "", "not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialization failed");
  }

  std::vector<uint8_t> data;
  std::vector<png_bytep> row_ptrs;
  int width = 0, height = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("", "", "corrupt PNG data");
  }

  PngReadState state{bytes.data(), bytes.size(), 0};
  png_set_read_fn(png, &state, png_mem_read);
  png_read_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  png_byte color = png_get_color_type(png, info);
  png_byte bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  size_t rowbytes = png_get_rowbytes(png, info);
  if (rowbytes != static_cast<size_t>(width) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("", "", "unsupported PNG layout");
  }
  data.resize(expected_samples(width, height));
  row_ptrs.resize(static_cast<size_t>(height));
  for (int y = 0; y < height; ++y) {
    row_ptrs[static_cast<size_t>(y)] = data.data() + static_cast<size_t>(y) * rowbytes;
  }
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return ImageBuffer::u8(width, height, std::move(data));
}

std::vector<uint8_t> encode_png(const ImageBuffer& img) {
  const auto& data = img.bytes();
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialization failed");
  }

  std::vector<uint8_t> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed");
  }

  png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
  // Fixed encoder settings keep output byte-identical across runs.
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_SUB);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
               static_cast<png_uint_32>(img.height()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(data.data() +
                                             static_cast<size_t>(y) * img.width() * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

ImageBuffer read_image(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes);
  }
  throw ParseError(path.filename().string(), "",
                   "unsupported image format (expected PNG or PPM P6)");
}

void write_png(const ImageBuffer& img, const std::filesystem::path& path) {
  write_file_atomic(path, encode_png(img));
}

void write_ppm(const ImageBuffer& img, const std::filesystem::path& path) {
  write_file_atomic(path, encode_ppm(img));
}

// --- tensor sidecar ---

namespace {

void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 24) & 0xFF));
}

uint32_t get_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

void write_tensor_file(const ImageBuffer& img, const std::filesystem::path& path) {
  const auto& data = img.floats();
  std::vector<uint8_t> out;
  out.reserve(16 + data.size() * 4);
  out.insert(out.end(), {'H', 'F', '0', '1'});
  put_u32le(out, static_cast<uint32_t>(img.width()));
  put_u32le(out, static_cast<uint32_t>(img.height()));
  put_u32le(out, ImageBuffer::kChannels);
  for (float v : data) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32le(out, bits);
  }
  write_file_atomic(path, out);
}

ImageBuffer read_tensor_file(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "HF01", 4) != 0) {
    throw ParseError(path.filename().string(), "", "not an HF01 tensor file");
  }
  uint32_t w = get_u32le(bytes.data() + 4);
  uint32_t h = get_u32le(bytes.data() + 8);
  uint32_t c = get_u32le(bytes.data() + 12);
  if (c != ImageBuffer::kChannels) {
    throw ParseError(path.filename().string(), "", "expected 3 channels");
  }
  size_t n = static_cast<size_t>(w) * h * c;
  if (bytes.size() != 16 + n * 4) {
    throw ParseError(path.filename().string(), "", "tensor payload size mismatch");
  }
  std::vector<float> data(n);
  for (size_t i = 0; i < n; ++i) {
    uint32_t bits = get_u32le(bytes.data() + 16 + i * 4);
    std::memcpy(&data[i], &bits, 4);
  }
  return ImageBuffer::f32(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

}  // namespace bovifuse
