#include "flowlab/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace flowlab {

void DiscreteMeasure::validate() const {
  if (subspace_dim < 1 || subspace_dim > kDim)
    throw std::invalid_argument("DiscreteMeasure: subspace_dim out of range");
  for (const Atom& a : atoms) {
    if (!a.pos.finite() || !std::isfinite(a.weight))
      throw std::invalid_argument("DiscreteMeasure: non-finite atom");
    if (!bounding_box.contains(a.pos))
      throw std::invalid_argument("DiscreteMeasure: atom outside bounding box");
  }
  if (density) density->validate();
  if (!std::isfinite(measure_total_variation(*this)))
    throw std::invalid_argument("DiscreteMeasure: infinite total variation");
}

DiscreteMeasure DiscreteMeasure::dirac(Vec2 p, double mass, int k) {
  DiscreteMeasure mu;
  mu.atoms.push_back({p, mass});
  mu.subspace_dim = k;
  return mu;
}

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<Atom> atoms, int k) {
  DiscreteMeasure mu;
  mu.atoms = std::move(atoms);
  mu.subspace_dim = k;
  return mu;
}

DiscreteMeasure DiscreteMeasure::from_density(ScalarGrid density, int k) {
  DiscreteMeasure mu;
  mu.subspace_dim = k;
  mu.density = std::move(density);
  return mu;
}

DiscreteMeasure DiscreteMeasure::sample_curve(const std::vector<Vec2>& polyline,
                                              double jump_height, double spacing) {
  if (polyline.size() < 2) throw std::invalid_argument("sample_curve: need a polyline");
  if (spacing <= 0.0) throw std::invalid_argument("sample_curve: spacing must be positive");
  DiscreteMeasure mu;
  for (size_t s = 0; s + 1 < polyline.size(); ++s) {
    const Vec2 a = polyline[s], b = polyline[s + 1];
    const double len = dist(a, b);
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    const double ds = len / n;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) / n;
      mu.atoms.push_back({a + (b - a) * t, ds * jump_height});
    }
  }
  return mu;
}

DiscreteMeasure DiscreteMeasure::scaled(double c) const {
  DiscreteMeasure out = *this;
  for (Atom& a : out.atoms) a.weight *= c;
  if (out.density)
    for (double& v : out.density->values) v *= c;
  return out;
}

double measure_total_variation(const DiscreteMeasure& mu) {
  double tv = 0.0;
  for (const Atom& a : mu.atoms) tv += std::abs(a.weight);
  if (mu.density) {
    double s = 0.0;
    for (double v : mu.density->values) s += std::abs(v);
    tv += s * (mu.subspace_dim == 1 ? mu.density->h : mu.density->cell_volume());
  }
  return tv;
}

void VectorMeasure::validate() const {
  for (const DiscreteMeasure& c : components) c.validate();
  const size_t n = components.empty() ? 0 : components.front().atoms.size();
  for (const DiscreteMeasure& c : components)
    if (c.atoms.size() != n)
      throw std::invalid_argument("VectorMeasure: components must share atom locations");
  for (const Vec2& v : xi)
    if (std::abs(v.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("VectorMeasure: xi must be unit");
  for (const Vec2& v : eta)
    if (std::abs(v.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("VectorMeasure: eta must be unit");
}

}  // namespace flowlab
