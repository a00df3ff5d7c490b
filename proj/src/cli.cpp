#include "mcf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

#include "mcf/algorithms.hpp"
#include "mcf/brun_highdim.hpp"
#include "mcf/density.hpp"
#include "mcf/dilog.hpp"
#include "mcf/errors.hpp"
#include "mcf/experiments.hpp"
#include "mcf/natext.hpp"
#include "mcf/rng.hpp"

namespace mcf {

namespace {

const Algorithm& resolve_algorithm(const std::string& name) {
  try {
    return get_algorithm(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

DensityModel resolve_model(const Algorithm& alg, const std::string& model) {
  std::string name = model;
  if (name.empty()) {
    if (!alg.density_model()) throw UsageError("no density model known for " + alg.name() + "; pass --model");
    name = *alg.density_model();
  }
  try {
    return DensityModel::named(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// Writes to a file, or to `fallback` when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw IoError("cannot open '" + path + "' for writing");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw IoError("write to '" + path_ + "' failed");
    }
  }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

Vec<double> random_start(const Algorithm& alg, Rng& rng) {
  Vec<double> x = random_simplex_point(rng, alg.dim());
  if (alg.domain().status<double>(view(x)) != ConeStatus::kInside) std::sort(x.begin(), x.end());
  return x;
}

template <Scalar T>
Vec<T> parse_point(const std::vector<std::string>& words, std::size_t dim, const char* what) {
  if (words.size() != dim) {
    throw UsageError(std::string(what) + " needs " + std::to_string(dim) + " coordinates");
  }
  Vec<T> v;
  for (const auto& w : words) {
    Rational q;
    try {
      q = parse_rational(w);
    } catch (const Error& e) {
      throw UsageError(std::string(what) + ": " + e.what());
    }
    v.push_back(from_rational<T>(q));
  }
  return v;
}

Window to_window(const std::vector<double>& w) { return {w.at(0), w.at(1), w.at(2), w.at(3)}; }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Options {
  unsigned threads = 1;
  std::string algo;
  std::string model;
  std::string mode = "float";
  std::string out;
  std::uint64_t seed = 1;
  std::vector<std::string> x, a;
  std::size_t steps = 10;
  bool restart = false;
  std::size_t samples = 10000;
  std::size_t points = 1000;
  double tol = 1e-10;
  std::optional<double> max_residual;
  std::string method = "auto";
  std::optional<double> z;
  std::size_t cells = 32;
  std::size_t burn_in = 1000;
  std::size_t d = 4;
  std::size_t mc_points = 10;
  std::size_t mc_samples = 1000000;
  std::size_t residual_points = 100;
  std::size_t res = 1024;
  std::vector<double> window{-0.6, 0.6, -0.6, 0.6};
  std::string order = "poincare-last";
  std::string coords = "embed";
  std::string png;
  bool png_sidecars = false;
  std::string in;
  std::string prefix = "panels";
};

int cmd_orbit(const Options& o, std::ostream& out, std::ostream& err) {
  const Algorithm& alg = resolve_algorithm(o.algo);
  const std::size_t d = alg.dim();
  Sink sink(o.out, out);
  *sink << orbit_csv_header(d);
  if (o.mode == "exact") {
    if (o.x.empty()) throw UsageError("exact orbits need --x");
    Vec<Rational> x = parse_point<Rational>(o.x, d, "--x");
    Vec<Rational> a = o.a.empty() ? Vec<Rational>(d, Rational(1)) : parse_point<Rational>(o.a, d, "--a");
    NatExtState<Rational> s{ConeVector<Rational>(std::move(x)), ConeVector<Rational>(std::move(a))};
    for (std::size_t n = 0;; ++n) {
      std::string label = "-";
      bool boundary = false;
      try {
        label = alg.branch(alg.classify(s.x().coords())).label;
      } catch (const BoundaryError& e) {
        boundary = true;
        err << "warning: orbit stopped at n=" << n << ": " << e.what() << "\n";
      }
      *sink << n << ',' << label << ',' << format_vector(s.x().coords()) << ',' << format_vector(s.a().coords())
            << '\n';
      if (boundary || n == o.steps) break;
      s = natext_step(alg, s).state;
    }
  } else {
    Rng rng(o.seed, 2);
    Vec<double> x = o.x.empty() ? random_start(alg, rng) : parse_point<double>(o.x, d, "--x");
    Vec<double> a = o.a.empty() ? random_simplex_point(rng, d) : parse_point<double>(o.a, d, "--a");
    const NatExtState<double> start{ConeVector<double>(std::move(x)), ConeVector<double>(std::move(a))};
    OrbitOptions opts;
    opts.restart_on_boundary = o.restart;
    const OrbitRun run = orbit_stream(
        alg, start, o.steps, o.seed, [&](const OrbitSample& s) { *sink << orbit_csv_row(alg, s); }, opts);
    for (const auto& m : run.diagnostics) err << "warning: " << m << "\n";
    if (run.truncated) err << "warning: orbit truncated after " << run.produced << " samples\n";
  }
  sink.close();
  return 0;
}

int cmd_audit(const Options& o, std::ostream& out, std::ostream& err) {
  const Algorithm& alg = resolve_algorithm(o.algo);
  const AuditReport rep = bijectivity_audit(alg, o.samples, o.seed, o.threads);
  Sink sink(o.out, out);
  *sink << rep.to_csv();
  sink.close();
  out << "violations " << rep.total_violations() << "\n";
  for (const auto& e : rep.examples) err << "example: " << e << "\n";
  if (rep.total_violations() > 0) throw NumericError(std::to_string(rep.total_violations()) + " audit violations");
  return 0;
}

int cmd_density_check(const Options& o, std::ostream& out, std::ostream& err) {
  const Algorithm& alg = resolve_algorithm(o.algo);
  const DensityModel model = resolve_model(alg, o.model);
  if (model.dim() != alg.dim()) throw UsageError("model dimension does not match the algorithm");
  Rng rng(o.seed, 3);
  Sink sink(o.out, out);
  *sink << "point";
  for (std::size_t i = 1; i <= alg.dim(); ++i) *sink << ",x" << i;
  *sink << ",lhs,rhs,residual,preimages\n";
  double worst = 0.0, worst_rel = 0.0;
  for (std::size_t p = 0; p < o.points; ++p) {
    const Vec<double> x = random_start(alg, rng);
    const TransferResidual r = transfer_residual(alg, model, view(x));
    worst = std::max(worst, r.residual);
    worst_rel = std::max(worst_rel, r.residual / r.lhs);
    *sink << p << ',' << format_vector(view(x)) << ',' << format_scalar(r.lhs) << ',' << format_scalar(r.rhs) << ','
          << format_scalar(r.residual) << ',' << r.preimages << '\n';
  }
  sink.close();
  std::ostream& summary = sink.to_file() ? out : err;
  summary << "max-residual " << format_scalar(worst) << "\nmax-relative " << format_scalar(worst_rel) << "\n";
  if (o.max_residual && worst >= *o.max_residual) {
    throw NumericError("max residual " + format_scalar(worst) + " not below " + format_scalar(*o.max_residual));
  }
  return 0;
}

int cmd_mass(const Options& o, std::ostream& out, std::ostream&) {
  std::optional<DensityModel> model;
  if (!o.model.empty()) {
    try {
      model = DensityModel::named(o.model);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  } else if (!o.algo.empty()) {
    model = resolve_model(resolve_algorithm(o.algo), "");
  } else {
    throw UsageError("mass needs --algo or --model");
  }
  const auto method = parse_mass_method(o.method);
  if (!method) throw UsageError("unknown method '" + o.method + "'");
  const MassResult r = total_mass(*model, *method, o.tol, o.seed, o.samples);
  out << "model " << model->name() << "\n";
  out << "method " << mass_method_name(r.method) << "\n";
  if (r.infinite) {
    out << "mass inf\n";
  } else {
    out << "mass " << format_scalar(r.value) << "\nerror " << format_scalar(r.error) << "\n";
  }
  return 0;
}

int cmd_dilog(const Options& o, std::ostream& out, std::ostream&) {
  if (o.z) {
    const double v = dilog(*o.z);
    out << "li2 " << format_scalar(v) << "\n";
    return 0;
  }
  const double lhs = dilog_identity_lhs();
  out << "lhs " << format_scalar(lhs) << "\n";
  out << "target " << format_scalar(std::numbers::pi * std::numbers::pi / 24.0) << "\n";
  out << "difference " << format_scalar(dilog_identity_check()) << "\n";
  return 0;
}

int cmd_hist(const Options& o, std::ostream& out, std::ostream& err) {
  const Algorithm& alg = resolve_algorithm(o.algo);
  const DensityModel model = resolve_model(alg, o.model);
  const HistogramComparison h = empirical_density(alg, model, o.steps, o.cells, o.seed, o.burn_in, o.threads);
  for (const auto& m : h.diagnostics) err << "warning: " << m << "\n";
  if (!o.out.empty()) {
    Sink sink(o.out, out);
    *sink << h.to_csv();
    sink.close();
  }
  out << "l1 " << format_scalar(h.l1) << "\nsup " << format_scalar(h.sup) << "\nrestarts " << h.restarts << "\n";
  return 0;
}

int cmd_brun_d(const Options& o, std::ostream& out, std::ostream&) {
  const std::size_t d = o.d;
  if (d < 3 || d > 8) throw UsageError("--d must be in 3..8");
  Rng rng(o.seed, 4);
  auto sorted_exact = [&] {
    while (true) {
      Vec<Rational> p = random_simplex_point_exact(rng, d);
      std::sort(p.begin(), p.end());
      if (std::adjacent_find(p.begin(), p.end()) == p.end()) return p;
    }
  };
  const std::uint32_t index_set = (1u << (d - 1)) - 1;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < o.points; ++i) {
    const Vec<Rational> x = sorted_exact();
    const Rational closed = brun_density_d(view(x), d);
    const Rational vol = polytope_volume_recursive(PolytopeSpec<Rational>{index_set, d - 2, x});
    if (vol != closed) ++mismatches;
  }
  out << "exact d=" << d << " points " << o.points << " mismatches " << mismatches << "\n";

  double worst_z = 0.0;
  std::size_t within = 0;
  for (std::size_t i = 0; i < o.mc_points; ++i) {
    const Vec<Rational> xq = sorted_exact();
    Vec<double> x;
    for (const auto& q : xq) x.push_back(q.get_d());
    const PolytopeSpec<double> spec{index_set, d - 2, x};
    const VolumeEstimate est = polytope_volume_oracle(spec, o.mc_samples, o.seed + i);
    const double exact = polytope_volume_recursive(PolytopeSpec<Rational>{index_set, d - 2, xq}).get_d();
    const double z = std::fabs(est.estimate - exact) / est.stderr_;
    worst_z = std::max(worst_z, z);
    within += z < 3.0;
  }
  if (o.mc_points > 0) {
    out << "oracle points " << o.mc_points << " within-3-sigma " << within << " max-z " << format_scalar(worst_z)
        << "\n";
  }

  const Algorithm& alg = get_algorithm("brun d=" + std::to_string(d));
  const DensityModel model = DensityModel::named("brun d=" + std::to_string(d));
  double worst = 0.0;
  for (std::size_t i = 0; i < o.residual_points; ++i) {
    Vec<double> x = random_simplex_point(rng, d);
    std::sort(x.begin(), x.end());
    worst = std::max(worst, transfer_residual(alg, model, view(x)).residual);
  }
  out << "transfer points " << o.residual_points << " max-residual " << format_scalar(worst) << "\n";
  if (mismatches > 0) throw NumericError(std::to_string(mismatches) + " exact mismatches");
  return 0;
}

void print_dual_summary(const Algorithm& alg, std::span<const OrbitSample> samples, std::ostream& out) {
  if (!alg.dual()) return;
  std::optional<std::size_t> first;
  std::size_t inside = 0;
  for (const auto& s : samples) {
    const bool in = in_natext_domain<double>(alg, view(s.x), view(s.a));
    if (in && !first) first = s.n;
    if (first) inside += in;
  }
  if (!first) {
    out << "absorption none\n";
    return;
  }
  out << "absorption " << *first << " in-domain " << inside << "/" << (samples.size() - *first) << "\n";
}

int cmd_panels(const Options& o, std::ostream& out, std::ostream& err) {
  const Algorithm& alg = resolve_algorithm(o.algo);
  if (alg.dim() != 3) throw UsageError("panels need a 3-d algorithm");
  const auto coords = parse_plot_coords(o.coords);
  const auto order = parse_draw_order(o.order);
  if (!coords) throw UsageError("unknown --coords '" + o.coords + "'");
  if (!order) throw UsageError("unknown --order '" + o.order + "'");
  Rng rng(o.seed, 2);
  Vec<double> x = random_start(alg, rng);
  Vec<double> a = random_simplex_point(rng, 3);
  OrbitOptions oo;
  oo.restart_on_boundary = o.restart;
  const OrbitCloud cloud = orbit_cloud(
      alg, NatExtState<double>{ConeVector<double>(std::move(x)), ConeVector<double>(std::move(a))}, o.steps,
      o.seed, oo);
  for (const auto& m : cloud.run.diagnostics) err << "warning: " << m << "\n";
  PanelOptions po;
  po.window = to_window(o.window);
  po.width = po.height = o.res;
  po.coords = *coords;
  po.order = *order;
  const auto panels = render_panels(alg, cloud.samples, po);
  const char* names[4] = {"xn", "an", "xn1", "an1"};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string path = o.prefix + "-" + names[i] + ".ppm";
    write_p6(panels[i], path);
    if (o.png_sidecars) write_png(panels[i], o.prefix + "-" + names[i] + ".png");
    out << names[i] << ' ' << path << " hash " << hex64(fnv1a64(encode_p6(panels[i]))) << " occupancy "
        << format_scalar(panels[i].occupancy()) << "\n";
  }
  print_dual_summary(alg, cloud.samples, out);
  return 0;
}

int cmd_fractal(const Options& o, std::ostream& out, std::ostream& err) {
  const Algorithm& alg = resolve_algorithm(o.algo);
  if (alg.dim() != 3) throw UsageError("fractal needs a 3-d algorithm");
  const auto coords = parse_plot_coords(o.coords);
  const auto order = parse_draw_order(o.order);
  if (!coords) throw UsageError("unknown --coords '" + o.coords + "'");
  if (!order) throw UsageError("unknown --order '" + o.order + "'");
  FractalOptions fo;
  fo.steps = o.steps;
  fo.window = to_window(o.window);
  fo.width = fo.height = o.res;
  fo.order = *order;
  fo.coords = *coords;
  fo.seed = o.seed;
  fo.restart_on_boundary = !o.restart;  // flag is --no-restart here
  const FractalResult r = render_fractal(alg, fo);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  for (const auto& m : r.run.diagnostics) err << "warning: " << m << "\n";
  write_p6(r.image, o.out);
  if (!o.png.empty()) write_png(r.image, o.png);
  out << "file " << o.out << "\nhash " << hex64(fnv1a64(encode_p6(r.image))) << "\noccupancy "
      << format_scalar(r.image.occupancy()) << "\nrestarts " << r.run.restarts << "\n";
  return 0;
}

int cmd_symmetry(const Options& o, std::ostream& out, std::ostream&) {
  const Algorithm* alg = o.algo.empty() ? nullptr : &resolve_algorithm(o.algo);
  const RasterGrid g = decode_p6(read_file(o.in), to_window(o.window));
  const SymmetryReport rep = symmetry_probe(g, alg);
  out << "jaccard " << format_scalar(rep.jaccard) << "\n";
  if (rep.jaccard_colored) out << "jaccard-colored " << format_scalar(*rep.jaccard_colored) << "\n";
  out << "occupied " << rep.occupied << "\ncompared " << rep.compared << "\n";
  return 0;
}

std::string algorithm_list() {
  std::string s = "Algorithms:";
  for (const auto& n : algorithm_names()) s += "\n  " + n;
  return s + "\n  (d in 2..8)";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Multidimensional continued fraction algorithms, natural extensions and invariant densities",
               "mcf"};
  app.footer(algorithm_list());
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  int code = 0;
  std::ostream* pout = &out;
  std::ostream* perr = &err;

  auto algo_opt = [&](CLI::App* c, bool required, const std::string& def = "") {
    o.algo = def;
    auto* opt = c->add_option("--algo", o.algo, "Algorithm name");
    if (required) opt->required();
    c->footer(algorithm_list());
  };
  auto bind = [&](CLI::App* c, int (*fn)(const Options&, std::ostream&, std::ostream&),
                  std::function<void()> defaults = {}) {
    c->fallthrough();
    c->callback([&, fn, defaults] {
      if (defaults) defaults();
      code = fn(o, *pout, *perr);
    });
  };

  auto* orbit = app.add_subcommand("orbit", "Natural-extension orbit as CSV");
  algo_opt(orbit, true);
  orbit->add_option("--mode", o.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
  orbit->add_option("--x", o.x, "Start point x (integers, p/q or decimals)")->delimiter(',');
  orbit->add_option("--a", o.a, "Start dual vector a (default all ones / random)")->delimiter(',');
  orbit->add_option("--steps", o.steps, "Number of steps")->capture_default_str();
  orbit->add_option("--seed", o.seed, "Seed")->capture_default_str();
  orbit->add_option("--out", o.out, "CSV output path (default stdout)");
  orbit->add_flag("--restart", o.restart, "Continue from a perturbed state after a boundary hit");
  bind(orbit, cmd_orbit);

  auto* audit = app.add_subcommand("audit", "Exact bijectivity audit of the natural-extension domain");
  algo_opt(audit, true);
  audit->add_option("--samples", o.samples, "Samples per check")->check(CLI::PositiveNumber)->capture_default_str();
  audit->add_option("--seed", o.seed, "Seed")->capture_default_str();
  audit->add_option("--out", o.out, "CSV report path (default stdout)");
  bind(audit, cmd_audit);

  auto* dc = app.add_subcommand("density-check", "Transfer-operator residuals at random points");
  algo_opt(dc, true);
  dc->add_option("--model", o.model, "Density model (default: the algorithm's)");
  dc->add_option("--points", o.points, "Number of points")->check(CLI::PositiveNumber)->capture_default_str();
  dc->add_option("--seed", o.seed, "Seed")->capture_default_str();
  dc->add_option("--max-residual", o.max_residual, "Fail when the largest residual is not below this");
  dc->add_option("--out", o.out, "CSV output path (default stdout)");
  bind(dc, cmd_density_check);

  auto* mass = app.add_subcommand("mass", "Total mass of an invariant density");
  algo_opt(mass, false);
  mass->add_option("--model", o.model, "Density model: farey, reverse, cassaigne, brun, brun-sorted, brun-sup, brun d=<n>");
  mass->add_option("--method", o.method, "auto, reduced-1d, adaptive-2d or monte-carlo")->capture_default_str();
  mass->add_option("--tol", o.tol, "Quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  mass->add_option("--seed", o.seed, "Seed for monte-carlo")->capture_default_str();
  mass->add_option("--samples", o.mc_samples, "Monte-Carlo samples")->check(CLI::PositiveNumber)->capture_default_str();
  bind(mass, cmd_mass);

  auto* dl = app.add_subcommand("dilog", "Dilogarithm identity check, or Li2(z) with --z");
  dl->add_option("--z", o.z, "Evaluate Li2 at z <= 1");
  bind(dl, cmd_dilog);

  auto* hist = app.add_subcommand("hist", "Orbit histogram against the invariant density");
  algo_opt(hist, true);
  hist->add_option("--model", o.model, "Density model (default: the algorithm's)");
  hist->add_option("--steps", o.steps, "Counted steps")->check(CLI::PositiveNumber);
  hist->add_option("--cells", o.cells, "Grid resolution k (k*k cells)")->check(CLI::PositiveNumber)->capture_default_str();
  hist->add_option("--burn-in", o.burn_in, "Discarded initial steps")->capture_default_str();
  hist->add_option("--seed", o.seed, "Seed")->capture_default_str();
  hist->add_option("--out", o.out, "Per-cell CSV output path");
  bind(hist, cmd_hist, [&] {
    if (hist->count("--steps") == 0) o.steps = 10000000;
  });

  auto* bd = app.add_subcommand("brun-d", "d-dimensional Brun density and polytope volume cross-check");
  bd->add_option("--d", o.d, "Dimension 3..8")->capture_default_str();
  bd->add_option("--points", o.points, "Exact comparison points");
  bd->add_option("--mc-points", o.mc_points, "Monte-Carlo oracle points")->capture_default_str();
  bd->add_option("--mc-samples", o.mc_samples, "Samples per oracle point")->check(CLI::PositiveNumber)->capture_default_str();
  bd->add_option("--residual-points", o.residual_points, "Transfer residual points")->capture_default_str();
  bd->add_option("--seed", o.seed, "Seed")->capture_default_str();
  bind(bd, cmd_brun_d, [&] {
    if (bd->count("--points") == 0) o.points = 100;
  });

  auto image_opts = [&](CLI::App* c) {
    c->add_option("--res", o.res, "Raster width and height")->check(CLI::PositiveNumber);
    c->add_option("--window", o.window, "Window x0 x1 y0 y1")->expected(4)->allow_extra_args(false);
    c->add_option("--order", o.order, "last-writer, poincare-last or ar-last");
    c->add_option("--coords", o.coords, "embed or difference")->capture_default_str();
    c->add_option("--seed", o.seed, "Seed")->capture_default_str();
  };

  auto* panels = app.add_subcommand("panels", "Four orbit panels x_n, a_n, x_n+1, a_n+1 as P6 images");
  algo_opt(panels, true);
  panels->add_option("--steps", o.steps, "Orbit steps");
  image_opts(panels);
  panels->add_option("--out-prefix", o.prefix, "Output file prefix")->capture_default_str();
  panels->add_flag("--restart", o.restart, "Continue from a perturbed state after a boundary hit");
  panels->add_flag("--png", o.png_sidecars, "Also write PNG sidecars");
  bind(panels, cmd_panels, [&] {
    if (panels->count("--steps") == 0) o.steps = 100000;
    if (panels->count("--res") == 0) o.res = 512;
    if (panels->count("--window") == 0) o.window = {-1.0, 1.0, -1.0, 1.0};
    if (panels->count("--order") == 0) o.order = "last-writer";
  });

  auto* fractal = app.add_subcommand("fractal", "Raster of the dual coordinates of a long orbit (P6)");
  algo_opt(fractal, false, "arp");
  fractal->add_option("--steps", o.steps, "Orbit steps");
  image_opts(fractal);
  fractal->add_option("--out", o.out, "P6 output path");
  fractal->add_option("--png", o.png, "PNG sidecar path");
  fractal->add_flag("--no-restart", o.restart, "Stop at a boundary hit instead of perturbing");
  bind(fractal, cmd_fractal, [&] {
    if (fractal->count("--steps") == 0) o.steps = 2000000;
    if (fractal->count("--out") == 0) o.out = "fractal.ppm";
  });

  auto* sym = app.add_subcommand("symmetry", "Jaccard score of a P6 raster against its 120 degree rotation");
  sym->add_option("--in", o.in, "P6 raster written by fractal")->required();
  sym->add_option("--window", o.window, "Window of the raster x0 x1 y0 y1")->expected(4);
  sym->add_option("--algo", o.algo, "Algorithm, for the branch-coloured score");
  bind(sym, cmd_symmetry);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int c = app.exit(e, out, err);
    return c == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error[" << category_name(e.category()) << "]: " << e.what() << "\n";
    return e.category() == ErrorCategory::kUsage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return code;
}

}  // namespace mcf
