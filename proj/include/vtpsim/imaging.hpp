#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vtpsim {

/// 8-bit RGB sample.
struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Rectangular raster addressed as (row, col) with row 0 at the top.
template <typename T>
class Raster {
 public:
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("Raster: width and height must be >= 1");
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  T& operator()(int row, int col) { return cells_[index(row, col)]; }
  const T& operator()(int row, int col) const { return cells_[index(row, col)]; }

  std::vector<T>& cells() { return cells_; }
  const std::vector<T>& cells() const { return cells_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_;
  int height_;
  std::vector<T> cells_;
};

using PixelFrame = Raster<Rgb>;            ///< camera frame, 8 bits per channel
using GrayFrame = Raster<double>;          ///< signed intensity frame
using BinaryFrame = Raster<std::uint8_t>;  ///< mask frame, cells in {0, 1}

/// Structuring element for erosion: an odd-sided square or a discrete disk
/// (integer offsets with dr^2 + dc^2 <= radius^2).
class Kernel {
 public:
  static Kernel square(int side) {
    if (side < 1 || side % 2 == 0)
      throw std::invalid_argument("Kernel::square: side must be odd and >= 1");
    Kernel k;
    const int half = side / 2;
    for (int dr = -half; dr <= half; ++dr)
      for (int dc = -half; dc <= half; ++dc) k.offsets_.emplace_back(dr, dc);
    return k;
  }

  static Kernel disk(int radius) {
    if (radius < 1) throw std::invalid_argument("Kernel::disk: radius must be >= 1");
    Kernel k;
    for (int dr = -radius; dr <= radius; ++dr)
      for (int dc = -radius; dc <= radius; ++dc)
        if (dr * dr + dc * dc <= radius * radius) k.offsets_.emplace_back(dr, dc);
    return k;
  }

  const std::vector<std::pair<int, int>>& offsets() const { return offsets_; }

 private:
  Kernel() = default;
  std::vector<std::pair<int, int>> offsets_;
};

/// Intensity conversion: out = r - g/gg - b/gb per pixel, in signed reals.
/// Negative values are kept; thresholding decides what counts as path.
inline GrayFrame channel_conv(const PixelFrame& frame, double gg, double gb) {
  if (!(gg >= 1.0) || !(gb >= 1.0))
    throw std::invalid_argument("channel_conv: gg and gb must be >= 1");
  GrayFrame out(frame.width(), frame.height());
  const auto& in = frame.cells();
  auto& cells = out.cells();
  for (std::size_t i = 0; i < in.size(); ++i)
    cells[i] = static_cast<double>(in[i].r) - in[i].g / gg - in[i].b / gb;
  return out;
}

/// Threshold to {0, 1}; the boundary value maps to 1.
inline BinaryFrame binarize(const GrayFrame& gray, double k_t) {
  BinaryFrame out(gray.width(), gray.height());
  const auto& in = gray.cells();
  auto& cells = out.cells();
  for (std::size_t i = 0; i < in.size(); ++i) cells[i] = in[i] >= k_t ? 1 : 0;
  return out;
}

/// Morphological erosion. A pixel survives only if every kernel offset lands
/// on a set pixel; offsets falling outside the frame count as unset.
inline BinaryFrame erode(const BinaryFrame& bin, const Kernel& kernel) {
  BinaryFrame out(bin.width(), bin.height(), 0);
  const auto& offs = kernel.offsets();
  for (int row = 0; row < bin.height(); ++row) {
    for (int col = 0; col < bin.width(); ++col) {
      bool keep = true;
      for (const auto& [dr, dc] : offs) {
        const int r = row + dr;
        const int c = col + dc;
        if (!bin.in_bounds(r, c) || bin(r, c) == 0) {
          keep = false;
          break;
        }
      }
      if (keep) out(row, col) = 1;
    }
  }
  return out;
}

}  // namespace vtpsim
