#include "latgrow/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latgrow/io.hpp"

namespace latgrow {

namespace {

// blue -> cyan -> green -> yellow -> red
constexpr std::array<Rgb, 5> kRamp{{{40, 40, 190}, {20, 170, 210}, {40, 170, 60}, {235, 200, 30}, {200, 40, 30}}};

Rgb ramp(double u) {
  u = std::clamp(u, 0.0, 1.0) * (kRamp.size() - 1);
  auto i = std::min<std::size_t>(static_cast<std::size_t>(u), kRamp.size() - 2);
  double f = u - static_cast<double>(i);
  Rgb c;
  for (std::size_t k = 0; k < 3; ++k) {
    c[k] = static_cast<std::uint8_t>(std::lround(kRamp[i][k] * (1 - f) + kRamp[i + 1][k] * f));
  }
  return c;
}

Rgb label_color(SiteLabel l) {
  switch (l) {
    case SiteLabel::type1: return {0, 0, 0};
    case SiteLabel::type2: return {210, 50, 40};
    case SiteLabel::seed: return {150, 150, 150};
    case SiteLabel::aggregate: return {0, 0, 0};
    case SiteLabel::particle: return {170, 200, 240};
    case SiteLabel::hole: return {240, 200, 170};
    case SiteLabel::empty: break;
  }
  return kBackground;
}

}  // namespace

Rgb SnapshotRaster::pixel(std::int64_t i, std::int64_t j) const {
  auto o = static_cast<std::size_t>((j * width + i) * 3);
  return {rgb[o], rgb[o + 1], rgb[o + 2]};
}

SnapshotRaster rasterize(const SiteGrid& grid, const RasterOptions& opt) {
  const Window& w = grid.window();
  const int d = w.dim();
  const std::int64_t W = w.radius();
  if (d >= 3 && std::abs(opt.slice) > W) throw DomainError("slice outside the window");
  if (opt.epochs < 1) throw DomainError("need at least one epoch band");

  SnapshotRaster r;
  r.width = w.side();
  r.height = d == 1 ? 1 : w.side();
  r.rgb.assign(static_cast<std::size_t>(r.width * r.height * 3), 0);

  double t_ref = opt.t_ref;
  if (!(t_ref > 0.0)) {
    t_ref = 0.0;
    if (std::isfinite(opt.t)) {
      t_ref = opt.t;
    } else {
      for (SiteIndex s = 0; s < w.size(); ++s) {
        double t = grid.occupied_at(s);
        if (is_occupied(grid.label(s)) && std::isfinite(t)) t_ref = std::max(t_ref, t);
      }
    }
  }

  Coord x(d);
  for (int a = 2; a < d; ++a) x[a] = opt.slice;
  for (std::int64_t j = 0; j < r.height; ++j) {
    for (std::int64_t i = 0; i < r.width; ++i) {
      x[0] = i - W;
      if (d >= 2) x[1] = W - j;
      SiteIndex s = w.index(x);
      SiteLabel l = grid.label(s);
      Rgb c = kBackground;
      if (is_occupied(l)) {
        double t = grid.occupied_at(s);
        if (t <= opt.t) {
          if (opt.style == RasterStyle::type_label) {
            c = label_color(l);
          } else {
            // bands keep the map monotone and piecewise constant in time
            double u = t_ref > 0.0 ? t / t_ref : 0.0;
            double band = std::min(std::floor(u * opt.epochs), static_cast<double>(opt.epochs - 1));
            c = ramp(opt.epochs > 1 ? band / (opt.epochs - 1) : 0.0);
          }
        } else if (opt.style == RasterStyle::type_label && !opt.seed_mask.empty() &&
                   opt.seed_mask[static_cast<std::size_t>(s)] != 0) {
          // seed not yet activated at t
          c = label_color(SiteLabel::seed);
        }
      } else if (opt.style == RasterStyle::type_label) {
        c = label_color(l);
      }
      auto o = static_cast<std::size_t>((j * r.width + i) * 3);
      std::copy(c.begin(), c.end(), r.rgb.begin() + static_cast<std::ptrdiff_t>(o));
    }
  }

  auto hex = [](Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
    return std::string(buf);
  };
  if (opt.style == RasterStyle::type_label) {
    for (SiteLabel l : {SiteLabel::empty, SiteLabel::type1, SiteLabel::type2, SiteLabel::seed,
                        SiteLabel::aggregate, SiteLabel::particle, SiteLabel::hole}) {
      r.legend["labels"][std::string(label_name(l))] = hex(label_color(l));
    }
  } else {
    nlohmann::json bands = nlohmann::json::array();
    for (int b = 0; b < opt.epochs; ++b) {
      double lo = t_ref * b / opt.epochs;
      double hi = t_ref * (b + 1) / opt.epochs;
      bands.push_back({{"from", lo}, {"to", hi}, {"color", hex(ramp(opt.epochs > 1 ? double(b) / (opt.epochs - 1) : 0.0))}});
    }
    r.legend["epochs"] = bands;
    r.legend["background"] = hex(kBackground);
  }
  r.legend["width"] = r.width;
  r.legend["height"] = r.height;
  if (d >= 3) r.legend["slice"] = opt.slice;
  return r;
}

SiteGrid to_site_grid(const DetState& st) {
  SiteGrid g(st.window);
  const auto a = static_cast<double>(st.ticks_per_unit);
  for (SiteIndex s = 0; s < st.window.size(); ++s) {
    auto i = static_cast<std::size_t>(s);
    SiteLabel l = st.label[i];
    if (is_occupied(l)) {
      g.occupy(s, l, static_cast<double>(st.tick[i]) / a);
    } else if (l != SiteLabel::empty) {
      g.set_mobile(s, l);
    }
  }
  return g;
}

std::string ppm_bytes(const SnapshotRaster& r, const std::string& comment) {
  std::string out = "P6\n";
  if (!comment.empty()) out += "# " + comment + "\n";
  out += std::to_string(r.width) + " " + std::to_string(r.height) + " 255\n";
  out.append(reinterpret_cast<const char*>(r.rgb.data()), r.rgb.size());
  return out;
}

void write_ppm(const std::filesystem::path& path, const SnapshotRaster& r, const std::string& comment) {
  write_file(path, ppm_bytes(r, comment));
}

}  // namespace latgrow
