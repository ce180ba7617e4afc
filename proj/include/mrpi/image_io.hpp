#pragma once

#include <cstdint>
#include <filesystem>

#include "mrpi/grid.hpp"

namespace mrpi {

/// Loads an 8-bit PNG (gray or RGB, alpha dropped) or a binary PGM (P5).
/// Colour is converted to luminance with weights 0.299 / 0.587 / 0.114.
/// Throws IoError when the file cannot be read, FormatError otherwise.
GrayImage load_image(const std::filesystem::path& path);

/// Loads an edge map image: pixels darker than mid-gray (< 128) are edges.
BinaryEdgeMap load_edge_map(const std::filesystem::path& path);

/// Writes an 8-bit single-channel PNG.
void save_png(const std::filesystem::path& path, const Grid<std::uint8_t>& pixels);

/// Edge pixels become 0 (black), background 255 (white).
Grid<std::uint8_t> render_edges(const BinaryEdgeMap& edges);

/// Rounds and clamps intensities into [0, 255].
Grid<std::uint8_t> render_intensity(const Grid<double>& img);

/// Linear min-max stretch onto [0, 255]; a flat field renders mid-gray.
Grid<std::uint8_t> render_stretched(const Grid<double>& field);

}  // namespace mrpi
