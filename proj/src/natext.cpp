#include "mcf/natext.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcf/parallel.hpp"
#include "mcf/rng.hpp"

namespace mcf {

template <Scalar T>
NatExtStep<T> natext_step(const Algorithm& alg, const NatExtState<T>& s) {
  const std::size_t i = alg.classify(s.x().coords());
  const Branch& b = alg.branch(i);
  if constexpr (std::same_as<T, double>) {
    return {i, NatExtState<T>(ConeVector<T>(apply_inverse(b.matrix_f, s.x().coords())),
                              ConeVector<T>(apply_transpose(b.matrix_f, s.a().coords())))};
  } else {
    return {i, NatExtState<T>(ConeVector<T>(apply_inverse(b.matrix, s.x().coords())),
                              ConeVector<T>(apply_transpose(b.matrix, s.a().coords())))};
  }
}

template <Scalar T>
NatExtStep<T> natext_step_renormalized(const Algorithm& alg, const NatExtState<T>& s) {
  NatExtStep<T> r = natext_step(alg, s);
  const T norm = l1_norm(r.state.x().coords());
  const T scale = norm / r.state.e();  // a * norm / e pairs to 1 with x / norm
  Vec<T> x(r.state.x().vec()), a(r.state.a().vec());
  for (T& c : x) c /= norm;
  for (T& c : a) c *= scale;
  return {r.branch, NatExtState<T>(ConeVector<T>(std::move(x)), ConeVector<T>(std::move(a)))};
}

template <Scalar T>
NatExtState<T> natext_inverse(const Algorithm& alg, std::size_t branch, const NatExtState<T>& s) {
  const Branch& b = alg.branch(branch);
  Vec<T> x, a;
  if constexpr (std::same_as<T, double>) {
    x = apply(b.matrix_f, s.x().coords());
    a = apply_inverse_transpose(b.matrix_f, s.a().coords());
  } else {
    x = apply(b.matrix, s.x().coords());
    a = apply_inverse_transpose(b.matrix, s.a().coords());
  }
  if (!strictly_positive(view(a))) {
    throw DomainError("natural-extension inverse: dual vector leaves the positive cone: " +
                      format_vector(view(a)));
  }
  if (!strictly_positive(view(x)) || b.cone.status(view(x)) != ConeStatus::kInside) {
    throw DomainError("natural-extension inverse: point not in the image of branch " +
                      alg.branch_id(branch).str());
  }
  return NatExtState<T>(ConeVector<T>(std::move(x)), ConeVector<T>(std::move(a)));
}

template <Scalar T>
double SectionPoint<T>::tau() const {
  return -std::log(to_double(norm));
}

template <Scalar T>
SectionPoint<T> to_section(const NatExtState<T>& s) {
  const std::size_t d = s.dim();
  SectionPoint<T> p;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    p.y.push_back(s.x()[i]);
    p.b.push_back(s.a()[i] - s.a()[d - 1]);
  }
  p.norm = l1_norm(s.x().coords());
  p.e = s.e();
  return p;
}

template <Scalar T>
NatExtState<T> from_section(const SectionPoint<T>& p) {
  const std::size_t d = p.y.size() + 1;
  if (p.b.size() + 1 != d) throw DomainError("section point dimension mismatch");
  Vec<T> x(d), a(d);
  T rest = p.norm;
  T pair = p.e;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    x[i] = p.y[i];
    rest -= p.y[i];
    pair -= p.b[i] * p.y[i];
  }
  x[d - 1] = rest;
  a[d - 1] = pair / p.norm;
  for (std::size_t i = 0; i + 1 < d; ++i) a[i] = p.b[i] + a[d - 1];
  return NatExtState<T>(ConeVector<T>(std::move(x)), ConeVector<T>(std::move(a)));
}

namespace {

const DualStructure& require_dual(const Algorithm& alg) {
  if (!alg.dual()) throw UnsupportedError(alg.name() + " has no declared dual domain");
  return *alg.dual();
}

template <Scalar T>
std::optional<std::size_t> unique_piece(const std::vector<LinearCone>& pieces, std::span<const T> a,
                                        const std::string& what) {
  bool boundary = false;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const ConeStatus st = pieces[i].status(a);
    if (st == ConeStatus::kInside) return i;
    if (st == ConeStatus::kBoundary) boundary = true;
  }
  if (boundary) throw BoundaryError(what + ": dual vector on a piece boundary: " + format_vector(a));
  return std::nullopt;
}

}  // namespace

template <Scalar T>
DualMembership dual_membership(const Algorithm& alg, std::span<const T> a) {
  const DualStructure& dual = require_dual(alg);
  if (!strictly_positive(a)) throw DomainError("dual vector not strictly positive");
  DualMembership m;
  if (dual.dual_cone) {
    switch (dual.dual_cone->status(a)) {
      case ConeStatus::kOutside:
        return m;
      case ConeStatus::kBoundary:
        throw BoundaryError(alg.name() + ": dual vector on the boundary of the dual cone: " +
                            format_vector(a));
      case ConeStatus::kInside:
        break;
    }
  }
  m.piece = unique_piece(dual.target, a, alg.name());
  m.in_dual = m.piece.has_value();
  for (std::size_t i = 0; i < dual.source.size(); ++i) {
    if (dual.source[i].status(a) == ConeStatus::kInside) m.sources.push_back(i);
  }
  return m;
}

template <Scalar T>
bool in_natext_domain(const Algorithm& alg, std::span<const T> x, std::span<const T> a) {
  const DualStructure& dual = require_dual(alg);
  const std::size_t i = alg.classify(x);
  switch (dual.source[i].status(a)) {
    case ConeStatus::kInside:
      return true;
    case ConeStatus::kOutside:
      return false;
    case ConeStatus::kBoundary:
      break;
  }
  throw BoundaryError(alg.name() + ": dual vector on the boundary of a source cone: " +
                      format_vector(a));
}

std::optional<std::size_t> absorption_time(const Algorithm& alg, const NatExtState<double>& s0,
                                           std::size_t max_n) {
  NatExtState<double> s = s0;
  for (std::size_t n = 0;; ++n) {
    if (in_natext_domain(alg, s.x().coords(), s.a().coords())) return n;
    if (n == max_n) return std::nullopt;
    s = natext_step_renormalized(alg, s).state;
  }
}

#define MCF_INSTANTIATE(T)                                                                   \
  template NatExtStep<T> natext_step(const Algorithm&, const NatExtState<T>&);             \
  template NatExtStep<T> natext_step_renormalized(const Algorithm&, const NatExtState<T>&); \
  template NatExtState<T> natext_inverse(const Algorithm&, std::size_t, const NatExtState<T>&); \
  template struct SectionPoint<T>;                                                         \
  template SectionPoint<T> to_section(const NatExtState<T>&);                              \
  template NatExtState<T> from_section(const SectionPoint<T>&);                            \
  template DualMembership dual_membership(const Algorithm&, std::span<const T>);           \
  template bool in_natext_domain(const Algorithm&, std::span<const T>, std::span<const T>);

MCF_INSTANTIATE(double)
MCF_INSTANTIATE(Rational)

#undef MCF_INSTANTIATE

// ---------------------------------------------------------------------------------------
// Audit

std::size_t AuditReport::total_violations() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.violations;
  return n;
}

std::string AuditReport::to_csv() const {
  std::ostringstream out;
  out << "piece,check,samples,violations\n";
  for (const auto& r : rows) {
    out << r.piece << ',' << r.check << ',' << r.samples << ',' << r.violations << '\n';
  }
  return out.str();
}

namespace {

using RayList = std::vector<Vec<Rational>>;

RayList mapped_rays(const RayList& rays, const SquareMatrix<Rational>& m, bool inverse_map) {
  RayList out;
  for (const auto& r : rays) {
    std::span<const Rational> s(r.data(), r.size());
    Vec<Rational> v = inverse_map ? apply_inverse(m, s) : apply_transpose(m, s);
    out.push_back(normalized_ray(std::span<const Rational>(v.data(), v.size())));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t ray_mismatch(const RayList& got, const RayList& want) {
  std::size_t n = 0;
  for (const auto& r : got) n += std::find(want.begin(), want.end(), r) == want.end();
  for (const auto& r : want) n += std::find(got.begin(), got.end(), r) == got.end();
  return n;
}

std::string state_text(const Vec<Rational>& x, const Vec<Rational>& a) {
  return "x=(" + format_vector(view(x)) + ") a=(" + format_vector(view(a)) + ")";
}

struct PieceResult {
  std::vector<AuditRow> rows;
  std::vector<std::string> examples;
};

constexpr std::size_t kMaxExamples = 5;

void note(PieceResult& r, AuditRow& row, std::string text) {
  ++row.violations;
  if (r.examples.size() < kMaxExamples) r.examples.push_back(row.piece + "/" + row.check + ": " + text);
}

std::size_t count_inside(const std::vector<LinearCone>& xs, const std::vector<LinearCone>& as,
                         const Vec<Rational>& x, const Vec<Rational>& a) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    n += xs[i].status(view(x)) == ConeStatus::kInside && as[i].status(view(a)) == ConeStatus::kInside;
  }
  return n;
}

}  // namespace

AuditReport bijectivity_audit(const Algorithm& alg, std::size_t n_samples, std::uint64_t seed,
                              unsigned threads) {
  const DualStructure& dual = require_dual(alg);
  const std::size_t nb = alg.branches().size();

  std::vector<LinearCone> cones, images;
  for (std::size_t i = 0; i < nb; ++i) {
    cones.push_back(alg.branch(i).cone);
    images.push_back(alg.image_cone(i));
  }

  // Task nb is the global union check; tasks < nb audit one branch each.
  std::vector<PieceResult> results(nb + 1);
  parallel_for(nb + 1, threads, [&](std::size_t task) {
    PieceResult& res = results[task];
    if (task == nb) {
      AuditRow fwd{"all", "partition-forward", 0, 0};
      AuditRow bwd{"all", "partition-backward", 0, 0};
      Rng rng(seed, 2 * nb + 1);
      for (std::size_t i = 0; i < nb; ++i) {
        const RayList xr = cones[i].extreme_rays(), ar = dual.source[i].extreme_rays();
        const RayList yr = images[i].extreme_rays(), br = dual.target[i].extreme_rays();
        const std::size_t per = std::max<std::size_t>(1, n_samples / nb);
        for (std::size_t k = 0; k < per; ++k) {
          Vec<Rational> x = random_interior_point(xr, rng), a = random_interior_point(ar, rng);
          ++fwd.samples;
          if (count_inside(images, dual.target, x, a) != 1 || count_inside(cones, dual.source, x, a) != 1)
            note(res, fwd, state_text(x, a));
          Vec<Rational> y = random_interior_point(yr, rng), b = random_interior_point(br, rng);
          ++bwd.samples;
          if (count_inside(cones, dual.source, y, b) != 1 || count_inside(images, dual.target, y, b) != 1)
            note(res, bwd, state_text(y, b));
        }
      }
      res.rows = {fwd, bwd};
      return;
    }

    const std::size_t i = task;
    const Branch& br = alg.branch(i);
    const std::string piece = br.label;
    const RayList xr = cones[i].extreme_rays(), ar = dual.source[i].extreme_rays();
    const RayList yr = images[i].extreme_rays(), tr = dual.target[i].extreme_rays();

    AuditRow rx{piece, "rays-x", xr.size(), ray_mismatch(mapped_rays(xr, br.matrix, true), yr)};
    AuditRow ra{piece, "rays-a", ar.size(), ray_mismatch(mapped_rays(ar, br.matrix, false), tr)};
    if (rx.violations && res.examples.size() < kMaxExamples)
      res.examples.push_back(piece + "/rays-x: M^-1 does not map the cone rays onto the image rays");
    if (ra.violations && res.examples.size() < kMaxExamples)
      res.examples.push_back(piece + "/rays-a: M^T does not map the source rays onto the target rays");

    AuditRow fwd{piece, "forward", 0, 0};
    AuditRow inv{piece, "inverse", 0, 0};
    Rng rng(seed, 2 * i);
    for (std::size_t k = 0; k < n_samples; ++k) {
      Vec<Rational> x = random_interior_point(xr, rng), a = random_interior_point(ar, rng);
      ++fwd.samples;
      try {
        NatExtState<Rational> s{ConeVector<Rational>(x), ConeVector<Rational>(a)};
        auto step = natext_step(alg, s);
        if (step.branch != i || images[i].status(step.state.x().coords()) != ConeStatus::kInside ||
            dual.target[i].status(step.state.a().coords()) != ConeStatus::kInside ||
            step.state.e() != s.e()) {
          note(res, fwd, state_text(x, a));
        }
      } catch (const Error& e) {
        note(res, fwd, state_text(x, a) + " " + e.what());
      }
    }
    Rng rng_inv(seed, 2 * i + 1);
    for (std::size_t k = 0; k < n_samples; ++k) {
      Vec<Rational> y = random_interior_point(yr, rng_inv), b = random_interior_point(tr, rng_inv);
      ++inv.samples;
      try {
        NatExtState<Rational> s{ConeVector<Rational>(y), ConeVector<Rational>(b)};
        NatExtState<Rational> back = natext_inverse(alg, i, s);
        if (dual.source[i].status(back.a().coords()) != ConeStatus::kInside || back.e() != s.e() ||
            !(natext_step(alg, back).state == s)) {
          note(res, inv, state_text(y, b));
        }
      } catch (const Error& e) {
        note(res, inv, state_text(y, b) + " " + e.what());
      }
    }
    res.rows = {fwd, inv, rx, ra};
  });

  AuditReport report{alg.name(), {}, {}};
  for (auto& r : results) {
    report.rows.insert(report.rows.end(), r.rows.begin(), r.rows.end());
    report.examples.insert(report.examples.end(), r.examples.begin(), r.examples.end());
  }
  return report;
}

}  // namespace mcf
