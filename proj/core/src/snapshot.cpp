#include "traversim/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "traversim/traversability.hpp"

namespace traversim {

namespace {

std::ofstream open_out(const std::filesystem::path& file, bool binary) {
  std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
  if (!out) {
    throw std::runtime_error("snapshot: cannot open '" + file.string() + "'");
  }
  return out;
}

}  // namespace

void write_pgm(const LayeredGridMap& map, std::string_view layer_id,
               const std::filesystem::path& file) {
  const Layer& layer = map.layer(layer_id);
  const MapGeometry& g = map.geometry();

  double lo = 0.0, hi = 1.0;
  if (!LayeredGridMap::is_bounded_layer(layer_id)) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (int r = 0; r < g.width_cells; ++r) {
      for (int c = 0; c < g.length_cells; ++c) {
        const auto& cell = layer.at({c, r});
        if (!cell.known) continue;
        lo = std::min(lo, cell.mean);
        hi = std::max(hi, cell.mean);
      }
    }
    if (lo > hi) {  // no known cells
      lo = 0.0;
      hi = 1.0;
    }
  }
  const double range = (hi > lo) ? hi - lo : 1.0;

  auto out = open_out(file, true);
  out << "P5\n" << g.length_cells << " " << g.width_cells << "\n255\n";
  // Image top row is the highest-y grid row so the picture matches the world.
  for (int r = g.width_cells - 1; r >= 0; --r) {
    for (int c = 0; c < g.length_cells; ++c) {
      const auto& cell = layer.at({c, r});
      unsigned char px = 0;
      if (cell.known) {
        const double t = std::clamp((cell.mean - lo) / range, 0.0, 1.0);
        px = static_cast<unsigned char>(1 + std::lround(t * 254.0));
      }
      out.put(static_cast<char>(px));
    }
  }
}

void write_csv(const LayeredGridMap& map, std::string_view layer_id,
               const std::filesystem::path& file) {
  const Layer& layer = map.layer(layer_id);
  const MapGeometry& g = map.geometry();
  auto out = open_out(file, false);
  char buf[64];
  for (int r = 0; r < g.width_cells; ++r) {
    for (int c = 0; c < g.length_cells; ++c) {
      if (c > 0) out.put(',');
      const auto& cell = layer.at({c, r});
      if (cell.known) {
        std::snprintf(buf, sizeof buf, "%.17g", cell.mean);
        out << buf;
      }
    }
    out.put('\n');
  }
}

void write_class_csv(const LayeredGridMap& map,
                     const std::filesystem::path& file) {
  const MapGeometry& g = map.geometry();
  auto out = open_out(file, false);
  for (int r = 0; r < g.width_cells; ++r) {
    for (int c = 0; c < g.length_cells; ++c) {
      if (c > 0) out.put(',');
      const ClassCell& cell = map.semantic_class().at({c, r});
      if (cell.observed()) out << to_string(cell.label());
    }
    out.put('\n');
  }
}

void write_category_ppm(const LayeredGridMap& map,
                        const std::filesystem::path& file) {
  const Layer& layer = map.layer(layer::traversability);
  const MapGeometry& g = map.geometry();

  auto out = open_out(file, true);
  out << "P6\n" << g.length_cells << " " << g.width_cells << "\n255\n";
  for (int r = g.width_cells - 1; r >= 0; --r) {
    for (int c = 0; c < g.length_cells; ++c) {
      const auto& cell = layer.at({c, r});
      unsigned char rgb[3] = {128, 128, 128};  // unknown
      if (cell.known) {
        switch (classify(clamp01(cell.mean))) {
          case TraversabilityCategory::traversable:
            rgb[0] = 64; rgb[1] = 200; rgb[2] = 64;
            break;
          case TraversabilityCategory::semi_traversable:
            rgb[0] = 16; rgb[1] = 100; rgb[2] = 16;
            break;
          case TraversabilityCategory::semi_untraversable:
            rgb[0] = 140; rgb[1] = 90; rgb[2] = 40;
            break;
          case TraversabilityCategory::untraversable:
            rgb[0] = 210; rgb[1] = 30; rgb[2] = 30;
            break;
        }
      }
      out.write(reinterpret_cast<const char*>(rgb), 3);
    }
  }
}

}  // namespace traversim
