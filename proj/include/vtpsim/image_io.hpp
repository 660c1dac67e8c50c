#pragma once

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "vtpsim/imaging.hpp"

namespace vtpsim {

/// Binary PPM (P6), maxval 255.
inline void write_ppm(const PixelFrame& frame, std::ostream& os) {
  os << "P6\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  for (const Rgb& px : frame.cells()) {
    os.put(static_cast<char>(px.r));
    os.put(static_cast<char>(px.g));
    os.put(static_cast<char>(px.b));
  }
}

/// Binary PGM (P5); set pixels become 255.
inline void write_pgm(const BinaryFrame& frame, std::ostream& os) {
  os << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  for (std::uint8_t bit : frame.cells()) os.put(static_cast<char>(bit ? 255 : 0));
}

/// Binary PGM (P5); signed intensities rescaled so -255 -> 0, 0 -> 128, 255 -> 255.
inline void write_pgm(const GrayFrame& frame, std::ostream& os) {
  os << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  for (double v : frame.cells()) {
    double scaled = std::round((v + 255.0) / 2.0);
    if (scaled < 0.0) scaled = 0.0;
    if (scaled > 255.0) scaled = 255.0;
    os.put(static_cast<char>(static_cast<std::uint8_t>(scaled)));
  }
}

template <typename FrameT>
void write_image_file(const FrameT& frame, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  if constexpr (std::is_same_v<FrameT, PixelFrame>)
    write_ppm(frame, os);
  else
    write_pgm(frame, os);
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace vtpsim
