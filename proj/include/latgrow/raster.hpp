#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latgrow/fpphe_det.hpp"
#include "latgrow/site_grid.hpp"

namespace latgrow {

enum class RasterStyle : std::uint8_t { epoch, type_label };

using Rgb = std::array<std::uint8_t, 3>;

struct SnapshotRaster {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top-left origin
  nlohmann::json legend;

  Rgb pixel(std::int64_t i, std::int64_t j) const;
};

struct RasterOptions {
  RasterStyle style = RasterStyle::epoch;
  double t = kNever;       // show sites occupied at or before t
  double t_ref = 0.0;      // epoch ramp spans [0, t_ref]; 0 means use t or the last occupation
  int epochs = 12;         // ramp is split into this many bands
  std::int64_t slice = 0;  // coordinate of axes >= 2 for d >= 3
  std::vector<std::uint8_t> seed_mask;  // original seeds, drawn dormant until occupied
};

inline constexpr Rgb kBackground{255, 255, 255};

/// d = 2: (2W+1) x (2W+1), pixel (i, j) is site (i - W, W - j).
/// d = 1: a 1 x (2W+1) strip. d >= 3: the slice x_2 = ... = x_{d-1} = slice.
SnapshotRaster rasterize(const SiteGrid& grid, const RasterOptions& opt);

/// Integer ticks become times tick / a; dormant seeds keep the seed label.
SiteGrid to_site_grid(const DetState& state);

/// Binary P6 with the provenance line as a header comment.
std::string ppm_bytes(const SnapshotRaster& r, const std::string& comment = "");
void write_ppm(const std::filesystem::path& path, const SnapshotRaster& r, const std::string& comment = "");

}  // namespace latgrow
