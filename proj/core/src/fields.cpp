#include "flowlab/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "flowlab/convolution.hpp"

namespace flowlab {

namespace {
double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
}

FieldSpec zero_field() {
  FieldSpec f;
  f.name = "zero";
  f.eval = [](double, Vec2) { return Vec2{0.0, 0.0}; };
  f.div_analytic = [](double, Vec2) { return 0.0; };
  return f;
}

FieldSpec constant_field(Vec2 v) {
  FieldSpec f;
  f.name = "constant";
  f.eval = [v](double, Vec2) { return v; };
  f.div_analytic = [](double, Vec2) { return 0.0; };
  return f;
}

FieldSpec rotation_field() {
  FieldSpec f;
  f.name = "rotation";
  f.eval = [](double, Vec2 x) { return Vec2{-x.y, x.x}; };
  f.div_analytic = [](double, Vec2) { return 0.0; };
  return f;
}

FieldSpec linear_field() {
  FieldSpec f;
  f.name = "linear";
  f.eval = [](double, Vec2 x) { return x; };
  f.div_analytic = [](double, Vec2) { return 2.0; };
  return f;
}

FieldSpec sine_shear_field() {
  FieldSpec f;
  f.name = "sine_shear";
  f.eval = [](double, Vec2 x) { return Vec2{std::sin(x.x), 0.0}; };
  f.div_analytic = [](double, Vec2 x) { return std::cos(x.x); };
  return f;
}

FieldSpec scaled_field(const FieldSpec& base, double factor) {
  FieldSpec f = base;
  f.name = base.name + "_scaled";
  auto ev = base.eval;
  f.eval = [ev, factor](double t, Vec2 x) { return ev(t, x) * factor; };
  if (base.div_analytic) {
    auto dv = base.div_analytic;
    f.div_analytic = [dv, factor](double t, Vec2 x) { return dv(t, x) * factor; };
  }
  return f;
}

FieldSpec shear_field() {
  FieldSpec f;
  f.kind = FieldKind::ShearJump;
  f.name = "shear";
  f.eval = [](double, Vec2 x) { return Vec2{sgn(x.y), 0.0}; };
  f.div_analytic = [](double, Vec2) { return 0.0; };
  f.eta = [](double, Vec2) { return Vec2{0.0, 1.0}; };
  JumpStructure j;
  j.xi = {1.0, 0.0};
  j.eta = {0.0, 1.0};
  j.jump_density = 2.0;  // jump of size 2 across {x2 = 0}
  for (int i = 0; i <= 64; ++i) j.curve.push_back({-4.0 + i * 0.125, 0.0});
  f.jump = j;
  return f;
}

CexRegion cex_region(Vec2 x) {
  if (x.y == 0.0) return CexRegion::Singular;
  if (std::abs(x.x) <= std::abs(x.y))
    return x.y > 0.0 ? CexRegion::UpperInner : CexRegion::LowerInner;
  return x.y > 0.0 ? CexRegion::UpperOuter : CexRegion::LowerOuter;
}

Vec2 counterexample_field(Vec2 x, std::optional<CexRegion> hint) {
  CexRegion r = cex_region(x);
  const bool near_split = std::abs(std::abs(x.x) - std::abs(x.y)) < 1e-12;
  if (hint && (r == CexRegion::Singular || near_split || std::abs(x.y) < 1e-12)) r = *hint;
  switch (r) {
    case CexRegion::UpperInner:
    case CexRegion::LowerInner:
      return {-sgn(x.y) * x.x / (x.y * x.y), -1.0 / std::abs(x.y)};
    case CexRegion::UpperOuter:
    case CexRegion::LowerOuter:
      return {-sgn(x.x * x.y), -1.0};
    case CexRegion::Singular:
      throw std::domain_error("counterexample_field: x2 = 0 is the singular set");
  }
  throw std::logic_error("unreachable");
}

FieldSpec counterexample_field_spec() {
  FieldSpec f;
  f.kind = FieldKind::CounterexampleDL;
  f.name = "counterexample";
  f.eval = [](double, Vec2 x) { return counterexample_field(x); };
  f.div_analytic = [](double, Vec2 x) {
    if (cex_region(x) == CexRegion::Singular)
      throw std::domain_error("counterexample divergence on singular set");
    return 0.0;  // divergence-free in each open region
  };
  return f;
}

FieldSpec convolution_field(const std::vector<std::vector<RoughKernel>>& kernels,
                            const std::vector<ScalarGrid>& b) {
  if (kernels.size() != kDim) throw std::invalid_argument("convolution_field: need d kernel rows");
  const size_t m = b.size();
  for (const auto& row : kernels)
    if (row.size() != m)
      throw std::invalid_argument("convolution_field: kernel matrix shape mismatch");
  for (const auto& row : kernels)
    for (const RoughKernel& k : row) {
      if (!std::isfinite(k.c1) || !std::isfinite(k.c2))
        throw std::invalid_argument("convolution_field: kernel admissibility not computed");
      if (k.radial == RadialPart::PowerD && k.omega.sup_abs() > 0.0 &&
          std::abs(k.omega.sphere_mean) > 1e-10)
        throw std::invalid_argument("convolution_field: kernel fails the cancellation check");
    }
  for (const ScalarGrid& g : b) g.validate();

  auto cache = std::make_shared<VectorGridCache>();
  for (int i = 0; i < kDim; ++i) {
    ScalarGrid acc = b.front();
    std::fill(acc.values.begin(), acc.values.end(), 0.0);
    for (size_t j = 0; j < m; ++j) {
      const ScalarGrid c = truncated_convolution_grid(kernels[i][j], b[j], b[j].h / 2.0);
      for (size_t q = 0; q < acc.values.size(); ++q) acc.values[q] += c.values[q];
    }
    (i == 0 ? cache->bx : cache->by) = std::move(acc);
  }

  FieldSpec f;
  f.kind = FieldKind::Convolution;
  f.name = "convolution";
  f.cache = cache;
  f.domain = b.front().bounds();
  auto cptr = f.cache;
  f.eval = [cptr](double, Vec2 x) { return cptr->interp(x); };
  return f;
}

FieldSpec mollify(const FieldSpec& spec, double sigma, const Box& box, int n) {
  if (sigma <= 0.0) throw std::invalid_argument("mollify: sigma must be positive");
  const double h = box.width() / n;
  if (sigma < 2.0 * h) throw std::invalid_argument("mollify: resolution error, need sigma >= 2h");
  const Mollifier rho(sigma);

  // fixed symmetric stencil over the mollifier support
  const int half = 8;
  const double hs = sigma / half;
  std::vector<std::pair<Vec2, double>> stencil;
  double wsum = 0.0;
  for (int j = -half; j <= half; ++j)
    for (int i = -half; i <= half; ++i) {
      const Vec2 y{i * hs, j * hs};
      const double w = rho(y);
      if (w > 0.0) {
        stencil.emplace_back(y, w);
        wsum += w;
      }
    }
  for (auto& [y, w] : stencil) w /= wsum;

  auto cache = std::make_shared<VectorGridCache>();
  const int ny = static_cast<int>(std::round(box.height() / h));
  cache->bx = ScalarGrid(box.lo, h, n, ny, 2);
  cache->by = ScalarGrid(box.lo, h, n, ny, 2);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 x = cache->bx.cell_center(i, j);
      Vec2 acc{0.0, 0.0};
      for (const auto& [y, w] : stencil) acc += spec.eval(0.0, x - y) * w;
      cache->bx.at(i, j) = acc.x;
      cache->by.at(i, j) = acc.y;
    }

  FieldSpec f;
  f.kind = FieldKind::Mollified;
  f.name = spec.name + "_mollified";
  f.sigma = sigma;
  f.cache = cache;
  f.domain = box;
  if (spec.eta) f.eta = spec.eta;
  auto cptr = f.cache;
  f.eval = [cptr](double, Vec2 x) { return cptr->interp(x); };
  return f;
}

double divergence(const FieldSpec& spec, double t, Vec2 x, double h, bool* near_singular) {
  if (near_singular) *near_singular = false;
  if (spec.has_analytic_div()) return spec.div_analytic(t, x);
  if (spec.kind == FieldKind::CounterexampleDL || spec.kind == FieldKind::ShearJump) {
    const double d_sing = spec.kind == FieldKind::CounterexampleDL
                              ? std::min(std::abs(x.y), std::abs(std::abs(x.x) - std::abs(x.y)))
                              : std::abs(x.y);
    if (near_singular && d_sing < 2.0 * h) *near_singular = true;
  }
  const double dbx = spec.eval(t, {x.x + h, x.y}).x - spec.eval(t, {x.x - h, x.y}).x;
  const double dby = spec.eval(t, {x.x, x.y + h}).y - spec.eval(t, {x.x, x.y - h}).y;
  return (dbx + dby) / (2.0 * h);
}

GrowthSplit growth_split(const FieldSpec& spec, const Box& box, double T, double tau, int n,
                         int nt) {
  GrowthSplit out;
  const double hx = box.width() / n;
  const double hy = box.height() / n;
  const double dt = T / nt;
  for (int k = 0; k < nt; ++k) {
    const double t = (k + 0.5) * dt;
    double l1 = 0.0, sup = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec2 x{box.lo.x + (i + 0.5) * hx, box.lo.y + (j + 0.5) * hy};
        double g;
        try {
          g = spec.eval(t, x).norm() / (1.0 + x.norm());
        } catch (const std::domain_error&) {
          continue;  // singular-set cell centers carry no quadrature weight
        }
        l1 += std::max(g - tau, 0.0) * hx * hy;
        sup = std::max(sup, std::min(g, tau));
      }
    out.l1_part += l1 * dt;
    out.linf_part += sup * dt;
  }
  return out;
}

}  // namespace flowlab
