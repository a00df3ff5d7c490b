#include "mcf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mcf/errors.hpp"
#include "mcf/rng.hpp"

#ifdef MCF_HAVE_PNG
#include <png.h>
#endif

namespace mcf {

namespace {

void rescale(Vec<double>& v) {
  double s = 0.0;
  for (double c : v) s += c;
  for (double& c : v) c /= s;
}

bool usable(const Vec<double>& v) {
  for (double c : v)
    if (!(c > 0.0) || !std::isfinite(c)) return false;
  return true;
}

}  // namespace

OrbitRun orbit_stream(const Algorithm& alg, const NatExtState<double>& start, std::size_t n_steps,
                      std::uint64_t seed, const OrbitVisitor& visit, const OrbitOptions& opts) {
  if (start.dim() != alg.dim()) throw DomainError("orbit start has the wrong dimension");
  OrbitRun run;
  Rng rng(seed, 0);
  OrbitSample s{0, 0, start.x().vec(), start.a().vec()};
  rescale(s.x);
  rescale(s.a);

  auto perturb = [&] {
    for (double& c : s.x) c *= 1.0 + 1e-9 * (rng.uniform() - 0.5);
    for (double& c : s.a) c *= 1.0 + 1e-9 * (rng.uniform() - 0.5);
    rescale(s.x);
    rescale(s.a);
  };

  while (true) {
    std::string failure;
    try {
      s.branch = alg.classify<double>(view(s.x));
    } catch (const BoundaryError& e) {
      failure = e.what();
    }
    if (!failure.empty()) {
      if (run.diagnostics.size() < 10) {
        run.diagnostics.push_back("boundary at n=" + std::to_string(s.n) + ": " + failure);
      }
      if (!opts.restart_on_boundary || run.restarts >= opts.max_restarts) {
        run.truncated = true;
        return run;
      }
      ++run.restarts;
      perturb();
      continue;
    }
    visit(s);
    ++run.produced;
    if (s.n == n_steps) return run;

    const Branch& b = alg.branch(s.branch);
    Vec<double> x = apply_inverse(b.matrix_f, view(s.x));
    Vec<double> a = apply_transpose(b.matrix_f, view(s.a));
    rescale(x);
    rescale(a);
    if (!usable(x) || !usable(a)) {
      if (run.diagnostics.size() < 10) {
        run.diagnostics.push_back("degenerate iterate after n=" + std::to_string(s.n));
      }
      if (!opts.restart_on_boundary || run.restarts >= opts.max_restarts) {
        run.truncated = true;
        return run;
      }
      ++run.restarts;
      perturb();
      continue;
    }
    s.x = std::move(x);
    s.a = std::move(a);
    ++s.n;
  }
}

OrbitCloud orbit_cloud(const Algorithm& alg, const NatExtState<double>& start, std::size_t n_steps,
                       std::uint64_t seed, const OrbitOptions& opts) {
  OrbitCloud c;
  c.run = orbit_stream(
      alg, start, n_steps, seed, [&](const OrbitSample& s) { c.samples.push_back(s); }, opts);
  return c;
}

std::string orbit_csv_header(std::size_t dim) {
  std::string h = "n,branch";
  for (std::size_t i = 1; i <= dim; ++i) h += ",x" + std::to_string(i);
  for (std::size_t i = 1; i <= dim; ++i) h += ",a" + std::to_string(i);
  return h + "\n";
}

std::string orbit_csv_row(const Algorithm& alg, const OrbitSample& s) {
  std::string r = std::to_string(s.n) + "," + alg.branch(s.branch).label;
  for (double c : s.x) r += "," + format_scalar(c);
  for (double c : s.a) r += "," + format_scalar(c);
  return r + "\n";
}

PlanePoint simplex_embed(std::span<const double> p) {
  if (p.size() != 3) throw UnsupportedError("simplex embedding needs a 3-d point");
  const double s = p[0] + p[1] + p[2];
  const double h = std::numbers::sqrt3 / 2.0;
  return {(-h * p[1] + h * p[2]) / s, (p[0] - 0.5 * p[1] - 0.5 * p[2]) / s};
}

PlanePoint difference_coords(std::span<const double> p) {
  if (p.size() != 3) throw UnsupportedError("difference coordinates need a 3-d point");
  const double s = p[0] + p[1] + p[2];
  return {(p[0] - p[2]) / s, (p[1] - p[2]) / s};
}

std::optional<PlotCoords> parse_plot_coords(std::string_view s) {
  if (s == "embed") return PlotCoords::kEmbed;
  if (s == "difference") return PlotCoords::kDifference;
  return std::nullopt;
}

PlanePoint plot_point(PlotCoords c, std::span<const double> p) {
  return c == PlotCoords::kEmbed ? simplex_embed(p) : difference_coords(p);
}

void Window::validate() const {
  if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(y0) || !std::isfinite(y1)) {
    throw DomainError("window bounds must be finite");
  }
  if (!(x0 < x1) || !(y0 < y1)) throw DomainError("window must be nonempty");
}

std::optional<DrawOrder> parse_draw_order(std::string_view s) {
  if (s == "last-writer") return DrawOrder::kLastWriter;
  if (s == "poincare-last") return DrawOrder::kPoincareLast;
  if (s == "ar-last") return DrawOrder::kArLast;
  return std::nullopt;
}

std::string_view draw_order_name(DrawOrder d) {
  switch (d) {
    case DrawOrder::kLastWriter:
      return "last-writer";
    case DrawOrder::kPoincareLast:
      return "poincare-last";
    case DrawOrder::kArLast:
      return "ar-last";
  }
  return "?";
}

std::vector<int> branch_priorities(const Algorithm& alg, DrawOrder order) {
  std::vector<int> p(alg.branches().size(), 0);
  const std::string_view top = order == DrawOrder::kPoincareLast ? "P" : order == DrawOrder::kArLast ? "AR" : "";
  if (top.empty()) return p;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = alg.branch(i).family == top ? 1 : 0;
  return p;
}

RasterGrid::RasterGrid(Window window, std::size_t width, std::size_t height)
    : window_(window), width_(width), height_(height) {
  window_.validate();
  if (width == 0 || height == 0) throw DomainError("raster resolution must be at least 1x1");
  if (width > 16384 || height > 16384) throw DomainError("raster resolution too large");
  branch_.assign(width * height, -1);
  priority_.assign(width * height, 0);
  hits_.assign(width * height, 0);
}

std::optional<std::size_t> RasterGrid::pixel_of(const PlanePoint& p) const {
  if (!window_.contains(p)) return std::nullopt;
  const double fx = (p[0] - window_.x0) / (window_.x1 - window_.x0) * static_cast<double>(width_);
  const double fy = (window_.y1 - p[1]) / (window_.y1 - window_.y0) * static_cast<double>(height_);
  const std::size_t col = std::min(static_cast<std::size_t>(fx), width_ - 1);
  const std::size_t row = std::min(static_cast<std::size_t>(std::max(fy, 0.0)), height_ - 1);
  return row * width_ + col;
}

PlanePoint RasterGrid::pixel_center(std::size_t col, std::size_t row) const {
  const double dx = (window_.x1 - window_.x0) / static_cast<double>(width_);
  const double dy = (window_.y1 - window_.y0) / static_cast<double>(height_);
  return {window_.x0 + (static_cast<double>(col) + 0.5) * dx, window_.y1 - (static_cast<double>(row) + 0.5) * dy};
}

bool RasterGrid::plot(const PlanePoint& p, int branch, int priority) {
  const auto idx = pixel_of(p);
  if (!idx) return false;
  ++hits_[*idx];
  if (branch_[*idx] < 0 || priority >= priority_[*idx]) {
    branch_[*idx] = branch;
    priority_[*idx] = priority;
  }
  return true;
}

void RasterGrid::set(std::size_t idx, int branch, std::uint32_t hits) {
  branch_.at(idx) = branch;
  hits_.at(idx) = branch < 0 ? 0 : hits;
}

std::size_t RasterGrid::occupied() const {
  return static_cast<std::size_t>(std::count_if(branch_.begin(), branch_.end(), [](int b) { return b >= 0; }));
}

double RasterGrid::occupancy() const {
  return static_cast<double>(occupied()) / static_cast<double>(branch_.size());
}

std::array<RasterGrid, 4> render_panels(const Algorithm& alg, std::span<const OrbitSample> samples,
                                        const PanelOptions& opts) {
  if (alg.dim() != 3) throw UnsupportedError("panels need a 3-d algorithm");
  RasterGrid g(opts.window, opts.width, opts.height);
  std::array<RasterGrid, 4> out{g, g, g, g};
  const std::vector<int> prio = branch_priorities(alg, opts.order);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const OrbitSample& s = samples[i];
    const OrbitSample& t = samples[i + 1];
    const int b = static_cast<int>(s.branch);
    const int pr = prio.at(s.branch);
    out[0].plot(plot_point(opts.coords, view(s.x)), b, pr);
    out[1].plot(plot_point(opts.coords, view(s.a)), b, pr);
    out[2].plot(plot_point(opts.coords, view(t.x)), b, pr);
    out[3].plot(plot_point(opts.coords, view(t.a)), b, pr);
  }
  return out;
}

namespace {

// Bounding box of the plotted range of each coordinate choice.
Window plot_range(PlotCoords c) {
  if (c == PlotCoords::kEmbed) return {-std::numbers::sqrt3 / 2.0, std::numbers::sqrt3 / 2.0, -0.5, 1.0};
  return {-1.0, 1.0, -1.0, 1.0};
}

}  // namespace

FractalResult render_fractal(const Algorithm& alg, const FractalOptions& opts) {
  if (alg.dim() != 3) throw UnsupportedError("fractal rasters need a 3-d algorithm");
  FractalResult res{RasterGrid(opts.window, opts.width, opts.height), {}, {}};
  const Window r = plot_range(opts.coords);
  const Window& w = opts.window;
  if (w.x1 <= r.x0 || w.x0 >= r.x1 || w.y1 <= r.y0 || w.y0 >= r.y1) {
    res.warnings.push_back("window does not meet the plotted range; image left empty");
    return res;
  }
  Rng rng(opts.seed, 1);
  Vec<double> x = random_simplex_point(rng, 3);
  Vec<double> a = random_simplex_point(rng, 3);
  if (alg.domain().status<double>(view(x)) != ConeStatus::kInside) std::sort(x.begin(), x.end());
  const NatExtState<double> start{ConeVector<double>(std::move(x)), ConeVector<double>(std::move(a))};
  const std::vector<int> prio = branch_priorities(alg, opts.order);
  if (opts.steps == 0) return res;
  OrbitOptions oo;
  oo.restart_on_boundary = opts.restart_on_boundary;
  // a_{n+1} takes the colour of the branch used at step n.
  std::optional<std::size_t> prev;
  res.run = orbit_stream(
      alg, start, opts.steps, opts.seed,
      [&](const OrbitSample& s) {
        if (prev && s.n > 0) {
          res.image.plot(plot_point(opts.coords, view(s.a)), static_cast<int>(*prev), prio[*prev]);
        }
        prev = s.branch;
      },
      oo);
  if (res.run.truncated) res.warnings.push_back("orbit truncated at a partition boundary");
  return res;
}

std::array<std::uint8_t, 3> palette_color(int branch) {
  static constexpr std::array<std::array<std::uint8_t, 3>, 12> kPalette{{
      {228, 26, 28},
      {55, 126, 184},
      {77, 175, 74},
      {152, 78, 163},
      {255, 127, 0},
      {166, 86, 40},
      {247, 129, 191},
      {102, 102, 102},
      {23, 190, 207},
      {188, 189, 34},
      {0, 0, 0},
      {31, 31, 120},
  }};
  if (branch < 0) return {255, 255, 255};
  return kPalette[static_cast<std::size_t>(branch) % kPalette.size()];
}

std::string encode_p6(const RasterGrid& g) {
  std::string out = "P6\n" + std::to_string(g.width()) + " " + std::to_string(g.height()) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + 3 * g.width() * g.height());
  for (std::size_t i = 0; i < g.width() * g.height(); ++i) {
    const auto c = palette_color(g.branch_at(i));
    out[header + 3 * i] = static_cast<char>(c[0]);
    out[header + 3 * i + 1] = static_cast<char>(c[1]);
    out[header + 3 * i + 2] = static_cast<char>(c[2]);
  }
  return out;
}

void write_p6(const RasterGrid& g, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  const std::string bytes = encode_p6(g);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write to '" + path + "' failed");
}

RasterGrid decode_p6(std::string_view bytes, Window window) {
  std::istringstream in{std::string(bytes)};
  std::string magic;
  std::size_t w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (!in || magic != "P6" || maxval != 255) throw DomainError("not an 8-bit binary PPM");
  in.get();
  const std::size_t header = static_cast<std::size_t>(in.tellg());
  if (bytes.size() != header + 3 * w * h) throw DomainError("PPM size does not match its header");
  RasterGrid g(window, w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    const std::array<std::uint8_t, 3> c{static_cast<std::uint8_t>(bytes[header + 3 * i]),
                                        static_cast<std::uint8_t>(bytes[header + 3 * i + 1]),
                                        static_cast<std::uint8_t>(bytes[header + 3 * i + 2])};
    if (c == palette_color(-1)) continue;
    int b = 0;
    while (b < 12 && palette_color(b) != c) ++b;
    if (b == 12) throw DomainError("PPM pixel colour is not in the palette");
    g.set(i, b);
  }
  return g;
}

bool png_available() {
#ifdef MCF_HAVE_PNG
  return true;
#else
  return false;
#endif
}

void write_png(const RasterGrid& g, const std::string& path) {
#ifdef MCF_HAVE_PNG
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(g.width());
  img.height = static_cast<png_uint_32>(g.height());
  img.format = PNG_FORMAT_RGB;
  const std::string p6 = encode_p6(g);
  const std::size_t header = p6.size() - 3 * g.width() * g.height();
  if (!png_image_write_to_file(&img, path.c_str(), 0, p6.data() + header, 0, nullptr)) {
    throw IoError("PNG write to '" + path + "' failed: " + img.message);
  }
#else
  (void)g;
  throw UnsupportedError("built without PNG support; cannot write '" + path + "'");
#endif
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

std::vector<int> cyclic_branch_map(const Algorithm& alg) {
  if (alg.dim() != 3) throw UnsupportedError("cyclic relabelling needs a 3-d algorithm");
  std::vector<int> map(alg.branches().size(), -1);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto rays = alg.branch(i).cone.extreme_rays();
    const Vec<Rational> c = central_point(rays);
    const Vec<Rational> s{c[2], c[0], c[1]};
    try {
      map[i] = static_cast<int>(alg.classify<Rational>(view(s)));
    } catch (const Error&) {
      map[i] = -1;
    }
  }
  return map;
}

SymmetryReport symmetry_probe(const RasterGrid& g, const Algorithm* alg) {
  if (g.width() != g.height()) throw UnsupportedError("symmetry probe needs a square raster");
  const Window& w = g.window();
  const double half = (w.x1 - w.x0) / 2.0;
  const double tol = 1e-12 * half;
  if (std::fabs(w.x0 + w.x1) > tol || std::fabs(w.y0 + w.y1) > tol || std::fabs((w.y1 - w.y0) / 2.0 - half) > tol) {
    throw DomainError("symmetry probe needs a square window centered on the origin");
  }
  std::vector<int> relabel;
  if (alg) relabel = cyclic_branch_map(*alg);

  // Pull back each pixel center through the rotation by +120 degrees.
  const double c = -0.5, s = std::numbers::sqrt3 / 2.0;
  SymmetryReport rep;
  std::size_t both = 0, either = 0, same = 0;
  const std::size_t n = g.width();
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      const PlanePoint p = g.pixel_center(col, row);
      if (p[0] * p[0] + p[1] * p[1] > half * half) continue;
      ++rep.compared;
      const std::size_t idx = row * n + col;
      const int here = g.branch_at(idx);
      const PlanePoint q{c * p[0] + s * p[1], -s * p[0] + c * p[1]};
      const auto src = g.pixel_of(q);
      const int there = src ? g.branch_at(*src) : -1;
      if (here >= 0) ++rep.occupied;
      if (here >= 0 || there >= 0) ++either;
      if (here >= 0 && there >= 0) {
        ++both;
        if (alg && relabel.at(static_cast<std::size_t>(there)) == here) ++same;
      }
    }
  }
  rep.jaccard = either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
  if (alg) rep.jaccard_colored = either == 0 ? 1.0 : static_cast<double>(same) / static_cast<double>(either);
  return rep;
}

}  // namespace mcf
