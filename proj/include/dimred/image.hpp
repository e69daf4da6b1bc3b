#pragma once

#include <dimred/error.hpp>
#include <dimred/matrix.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dimred {

/// Grayscale image; every pixel is a real intensity in [0, 255].
class GrayImage {
public:
  explicit GrayImage(Matrix pixels) : pixels_(std::move(pixels)) {
    if (pixels_.rows() == 0 || pixels_.cols() == 0) {
      throw Error(Errc::ShapeMismatch, "image dimensions must be positive");
    }
    for (double v : pixels_.values()) {
      if (v < 0.0 || v > 255.0) {
        throw Error(Errc::PixelRange, "pixel value outside [0, 255]");
      }
    }
  }

  const Matrix& pixels() const noexcept { return pixels_; }
  std::size_t height() const noexcept { return pixels_.rows(); }
  std::size_t width() const noexcept { return pixels_.cols(); }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
  Matrix pixels_;
};

/// Color image stored as three planes of identical shape.
class RgbImage {
public:
  RgbImage(Matrix red, Matrix green, Matrix blue)
      : planes_{GrayImage(std::move(red)), GrayImage(std::move(green)), GrayImage(std::move(blue))} {
    const Shape s = planes_[0].pixels().shape();
    if (planes_[1].pixels().shape() != s || planes_[2].pixels().shape() != s) {
      throw Error(Errc::ShapeMismatch, "color planes differ in shape");
    }
  }

  const Matrix& red() const noexcept { return planes_[0].pixels(); }
  const Matrix& green() const noexcept { return planes_[1].pixels(); }
  const Matrix& blue() const noexcept { return planes_[2].pixels(); }
  const Matrix& channel(std::size_t c) const { return planes_.at(c).pixels(); }
  std::size_t height() const noexcept { return planes_[0].height(); }
  std::size_t width() const noexcept { return planes_[0].width(); }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
  std::array<GrayImage, 3> planes_;
};

namespace detail {

class NetpbmScanner {
public:
  explicit NetpbmScanner(std::string_view bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads an unsigned decimal.
  std::size_t header_value(const char* field) {
    skip_space_and_comments();
    return read_unsigned(field, Errc::BadHeader);
  }

  std::size_t ascii_sample() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw Error(Errc::TruncatedData, "fewer samples than width*height");
    return read_unsigned("sample", Errc::BadHeader);
  }

  // The single whitespace byte that separates the header from binary data.
  void end_of_header() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(Errc::BadHeader, "missing whitespace after maxval");
    }
    ++pos_;
  }

  std::string_view remaining() const { return bytes_.substr(pos_); }

private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = static_cast<unsigned char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_unsigned(const char* field, Errc code) {
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > (std::size_t{1} << 40)) throw Error(code, std::string(field) + " is too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw Error(code, std::string("missing or non-numeric ") + field);
    return value;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

struct NetpbmHeader {
  bool binary = false;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t maxval = 0;
};

inline NetpbmHeader read_header(NetpbmScanner& scan, std::string_view bytes, char ascii_magic,
                                char binary_magic) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != ascii_magic && bytes[1] != binary_magic)) {
    throw Error(Errc::BadMagic, std::string("expected P") + ascii_magic + " or P" + binary_magic);
  }
  NetpbmHeader h;
  h.binary = bytes[1] == binary_magic;
  h.width = scan.header_value("width");
  h.height = scan.header_value("height");
  h.maxval = scan.header_value("maxval");
  if (h.width == 0 || h.height == 0) throw Error(Errc::BadHeader, "zero image dimension");
  if (h.maxval == 0) throw Error(Errc::BadHeader, "maxval must be positive");
  if (h.maxval > 255) {
    throw Error(Errc::UnsupportedMaxval, "maxval " + std::to_string(h.maxval) + " exceeds 255");
  }
  return h;
}

inline std::vector<double> read_samples(NetpbmScanner& scan, const NetpbmHeader& h,
                                        std::size_t count) {
  std::vector<double> out(count);
  if (h.binary) {
    scan.end_of_header();
    const std::string_view data = scan.remaining();
    if (data.size() < count) {
      throw Error(Errc::TruncatedData, "expected " + std::to_string(count) + " bytes, found " +
                                           std::to_string(data.size()));
    }
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<unsigned char>(data[i]);
  } else {
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(scan.ascii_sample());
  }
  for (double v : out) {
    if (v > static_cast<double>(h.maxval)) throw Error(Errc::BadHeader, "sample exceeds maxval");
  }
  return out;
}

inline int quantize(double v) {
  return static_cast<int>(std::round(std::clamp(v, 0.0, 255.0)));
}

inline void append_body(std::string& out, std::span<const Matrix* const> planes, bool binary) {
  const Matrix& first = *planes[0];
  for (std::size_t i = 0; i < first.rows(); ++i) {
    for (std::size_t j = 0; j < first.cols(); ++j) {
      for (std::size_t c = 0; c < planes.size(); ++c) {
        const int q = quantize((*planes[c])(i, j));
        if (binary) {
          out += static_cast<char>(static_cast<unsigned char>(q));
        } else {
          if (j != 0 || c != 0) out += ' ';
          out += std::to_string(q);
        }
      }
    }
    if (!binary) out += '\n';
  }
}

inline std::string header_text(char magic, const Matrix& m) {
  return std::string("P") + magic + ' ' + std::to_string(m.cols()) + ' ' +
         std::to_string(m.rows()) + " 255\n";
}

} // namespace detail

/// Parses P2 (ASCII) or P5 (binary) grayscale with maxval <= 255.
inline GrayImage read_pgm(std::string_view bytes) {
  detail::NetpbmScanner scan(bytes.size() >= 2 ? bytes.substr(2) : std::string_view{});
  const auto h = detail::read_header(scan, bytes, '2', '5');
  return GrayImage(Matrix(h.height, h.width, detail::read_samples(scan, h, h.width * h.height)));
}

/// Parses P3 (ASCII) or P6 (binary) color with maxval <= 255.
inline RgbImage read_ppm(std::string_view bytes) {
  detail::NetpbmScanner scan(bytes.size() >= 2 ? bytes.substr(2) : std::string_view{});
  const auto h = detail::read_header(scan, bytes, '3', '6');
  const std::vector<double> samples = detail::read_samples(scan, h, 3 * h.width * h.height);
  Matrix r(h.height, h.width), g(h.height, h.width), b(h.height, h.width);
  for (std::size_t i = 0; i < h.height; ++i) {
    for (std::size_t j = 0; j < h.width; ++j) {
      const std::size_t base = 3 * (i * h.width + j);
      r(i, j) = samples[base];
      g(i, j) = samples[base + 1];
      b(i, j) = samples[base + 2];
    }
  }
  return RgbImage(std::move(r), std::move(g), std::move(b));
}

//
// Writers emit one canonical form: "P2 W H 255\n" then the samples (one image
// row per line in ASCII). Values are clamped to [0,255] and rounded half away
// from zero, so any real matrix can be written.
//
inline std::string write_pgm(const Matrix& pixels, bool binary) {
  std::string out = detail::header_text(binary ? '5' : '2', pixels);
  const Matrix* planes[] = {&pixels};
  detail::append_body(out, planes, binary);
  return out;
}

inline std::string write_pgm(const GrayImage& img, bool binary) {
  return write_pgm(img.pixels(), binary);
}

inline std::string write_ppm(const Matrix& red, const Matrix& green, const Matrix& blue,
                             bool binary) {
  if (green.shape() != red.shape() || blue.shape() != red.shape()) {
    throw Error(Errc::ShapeMismatch, "color planes differ in shape");
  }
  std::string out = detail::header_text(binary ? '6' : '3', red);
  const Matrix* planes[] = {&red, &green, &blue};
  detail::append_body(out, planes, binary);
  return out;
}

inline std::string write_ppm(const RgbImage& img, bool binary) {
  return write_ppm(img.red(), img.green(), img.blue(), binary);
}

/// One row per image, each image scanned row-major.
inline Matrix flatten_images(std::span<const GrayImage> images) {
  if (images.empty()) throw Error(Errc::ShapeMismatch, "no images to flatten");
  const Shape shape = images[0].pixels().shape();
  Matrix out(images.size(), shape.rows * shape.cols);
  for (std::size_t n = 0; n < images.size(); ++n) {
    if (images[n].pixels().shape() != shape) {
      throw Error(Errc::ShapeMismatch, "image " + std::to_string(n) + " is " +
                                           to_string(images[n].pixels().shape()) + ", expected " +
                                           to_string(shape));
    }
    const auto src = images[n].pixels().values();
    std::copy(src.begin(), src.end(), out.row(n).begin());
  }
  return out;
}

} // namespace dimred
