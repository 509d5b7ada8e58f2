#pragma once

#include <filesystem>

#include "emorec/plane.hpp"

namespace emorec::io {

/// Reads PNG (any bit depth / color type, alpha dropped) or binary PPM (P6).
/// Throws IoError on unreadable or unsupported files.
ColorImage read_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const ColorImage& img);
void write_png(const std::filesystem::path& path, const GrayPlane& plane);
void write_ppm(const std::filesystem::path& path, const ColorImage& img);

}  // namespace emorec::io
