#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcf/algorithms.hpp"
#include "mcf/natext.hpp"

namespace mcf {

/// One point (x_n, a_n) of a renormalized natural-extension orbit. Both points lie on the
/// open unit simplex; `branch` is the branch of x_n, i.e. the matrix used for step n.
struct OrbitSample {
  std::size_t n;
  std::size_t branch;
  Vec<double> x;
  Vec<double> a;
};

struct OrbitOptions {
  /// On a boundary hit, continue from a slightly perturbed state instead of stopping.
  bool restart_on_boundary = false;
  std::size_t max_restarts = 100;
};

struct OrbitRun {
  std::size_t produced = 0;  // samples delivered to the callback
  bool truncated = false;
  std::size_t restarts = 0;
  std::vector<std::string> diagnostics;
};

using OrbitVisitor = std::function<void(const OrbitSample&)>;

/// Streams samples n = 0..n_steps of the orbit of `start` (float mode). Each step applies
/// (M^-1 x, M^T a) and rescales both vectors to coordinate sum 1. Perturbations after a
/// boundary hit draw from the (seed, 0) stream, so output is a function of (start, seed).
OrbitRun orbit_stream(const Algorithm& alg, const NatExtState<double>& start, std::size_t n_steps,
                      std::uint64_t seed, const OrbitVisitor& visit, const OrbitOptions& opts = {});

struct OrbitCloud {
  std::vector<OrbitSample> samples;
  OrbitRun run;
};

/// orbit_stream collected into memory.
OrbitCloud orbit_cloud(const Algorithm& alg, const NatExtState<double>& start, std::size_t n_steps,
                       std::uint64_t seed, const OrbitOptions& opts = {});

/// CSV header plus one row per sample: n,branch,x1..xd,a1..ad.
std::string orbit_csv_header(std::size_t dim);
std::string orbit_csv_row(const Algorithm& alg, const OrbitSample& s);

using PlanePoint = std::array<double, 2>;

/// Barycentric embedding of a 3-d simplex point onto the equilateral triangle with vertices
/// (0, 1), (-sqrt3/2, -1/2), (sqrt3/2, -1/2). The input is rescaled to sum 1 first.
PlanePoint simplex_embed(std::span<const double> p);

/// (a1 - a3, a2 - a3) of the point rescaled to sum 1.
PlanePoint difference_coords(std::span<const double> p);

enum class PlotCoords { kEmbed, kDifference };
std::optional<PlotCoords> parse_plot_coords(std::string_view s);

PlanePoint plot_point(PlotCoords c, std::span<const double> p);

struct Window {
  double x0, x1, y0, y1;

  void validate() const;
  bool contains(const PlanePoint& p) const { return p[0] >= x0 && p[0] < x1 && p[1] >= y0 && p[1] < y1; }
};

enum class DrawOrder { kLastWriter, kPoincareLast, kArLast };
std::optional<DrawOrder> parse_draw_order(std::string_view s);
std::string_view draw_order_name(DrawOrder d);

/// Per-branch overwrite priority: a point replaces the pixel's branch when its priority is
/// at least the stored one.
std::vector<int> branch_priorities(const Algorithm& alg, DrawOrder order);

/// Pixel raster over a plane window. Row 0 is the top edge (largest y).
class RasterGrid {
 public:
  RasterGrid(Window window, std::size_t width, std::size_t height);

  const Window& window() const noexcept { return window_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

  /// Pixel index of a plane point, or nullopt outside the window.
  std::optional<std::size_t> pixel_of(const PlanePoint& p) const;
  PlanePoint pixel_center(std::size_t col, std::size_t row) const;

  /// Records a hit; returns false outside the window.
  bool plot(const PlanePoint& p, int branch, int priority = 0);

  /// Branch of the last accepted writer, -1 for an empty pixel.
  int branch_at(std::size_t idx) const { return branch_[idx]; }
  std::uint32_t hits_at(std::size_t idx) const { return hits_[idx]; }
  void set(std::size_t idx, int branch, std::uint32_t hits = 1);

  std::size_t occupied() const;
  double occupancy() const;

 private:
  Window window_;
  std::size_t width_;
  std::size_t height_;
  std::vector<int> branch_;
  std::vector<int> priority_;
  std::vector<std::uint32_t> hits_;
};

struct PanelOptions {
  Window window{-1.0, 1.0, -1.0, 1.0};
  std::size_t width = 512;
  std::size_t height = 512;
  PlotCoords coords = PlotCoords::kEmbed;
  DrawOrder order = DrawOrder::kLastWriter;
};

/// Four rasters x_n, a_n, x_{n+1}, a_{n+1} for consecutive sample pairs, all colored by the
/// branch of step n.
std::array<RasterGrid, 4> render_panels(const Algorithm& alg, std::span<const OrbitSample> samples,
                                        const PanelOptions& opts);

struct FractalOptions {
  std::size_t steps = 2000000;
  Window window{-0.6, 0.6, -0.6, 0.6};
  std::size_t width = 1024;
  std::size_t height = 1024;
  DrawOrder order = DrawOrder::kPoincareLast;
  PlotCoords coords = PlotCoords::kEmbed;
  std::uint64_t seed = 1;
  bool restart_on_boundary = true;
};

struct FractalResult {
  RasterGrid image;
  OrbitRun run;
  std::vector<std::string> warnings;
};

/// Raster of the dual points a_1..a_steps of one orbit started at a seeded random
/// (x, a), each coloured by the branch of the step that produced it. Pure function of
/// (alg, opts).
FractalResult render_fractal(const Algorithm& alg, const FractalOptions& opts);

/// RGB colour of a branch index; white for -1.
std::array<std::uint8_t, 3> palette_color(int branch);

/// Binary PPM bytes of a raster.
std::string encode_p6(const RasterGrid& g);
void write_p6(const RasterGrid& g, const std::string& path);
/// Inverse of encode_p6: palette colours back to branch indices (modulo the palette size).
RasterGrid decode_p6(std::string_view bytes, Window window);

/// True when PNG sidecars are compiled in.
bool png_available();
/// Throws UnsupportedError when PNG support is not compiled in.
void write_png(const RasterGrid& g, const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

struct SymmetryReport {
  double jaccard = 0.0;  // occupied set vs its 120 degree rotation
  std::optional<double> jaccard_colored;  // also requiring matching (permuted) branches
  std::size_t occupied = 0;
  std::size_t compared = 0;  // pixels inside the inscribed disk
};

/// Compares the occupied pixels inside the disk inscribed in the window with the image
/// rotated by 120 degrees about the origin. With an algorithm, branches are relabelled under
/// the coordinate 3-cycle for the coloured score. Non-square rasters are unsupported.
SymmetryReport symmetry_probe(const RasterGrid& g, const Algorithm* alg = nullptr);

/// Branch index of the conjugate of each branch under x -> (x3, x1, x2).
std::vector<int> cyclic_branch_map(const Algorithm& alg);

}  // namespace mcf
