/*
 * snapshot.hpp
 *
 * Layer snapshot writers: 8-bit binary PGM for quick viewing, lossless CSV
 * for analysis, and a categorical PPM for report figures.
 */

#ifndef TRAVERSIM_SNAPSHOT_HPP
#define TRAVERSIM_SNAPSHOT_HPP

#include <filesystem>
#include <string_view>

#include "traversim/grid_map.hpp"

namespace traversim {

/// P5 graymap of a layer. Bounded layers scale over [0, 1]; other layers
/// scale over their observed min/max. Unknown cells are written as 0 and
/// known cells are mapped to 1..255.
void write_pgm(const LayeredGridMap& map, std::string_view layer_id,
               const std::filesystem::path& file);

/// Row-major CSV of layer means at full precision; unknown cells are emitted
/// as an empty field. Row 0 is grid row 0 (smallest y).
void write_csv(const LayeredGridMap& map, std::string_view layer_id,
               const std::filesystem::path& file);

/// Row-major CSV of semantic class labels; never-observed cells are emitted
/// as an empty field.
void write_class_csv(const LayeredGridMap& map,
                     const std::filesystem::path& file);

/// P6 color map of the traversability layer banded by category: green
/// (traversable), dark green (semi-traversable), brown (semi-untraversable),
/// red (untraversable), gray (unknown).
void write_category_ppm(const LayeredGridMap& map,
                        const std::filesystem::path& file);

}  // namespace traversim

#endif  // TRAVERSIM_SNAPSHOT_HPP
