#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowlab/fields.hpp"
#include "flowlab/geometry.hpp"

namespace flowlab {

struct ParticleCloud {
  Box box{{-1, -1}, {1, 1}};
  double h_p = 0.1;
  int nx = 0;
  int ny = 0;
  std::vector<Vec2> points;

  static ParticleCloud lattice(const Box& box, double h_p);
  int index(int i, int j) const { return j * nx + i; }
};

struct ParticleFlow {
  ParticleCloud cloud;
  std::vector<double> times;
  std::vector<std::vector<Vec2>> positions;   // [time][particle]
  std::vector<uint8_t> escaped;
  std::vector<std::vector<int8_t>> region;    // counterexample flows only
  double dt = 0.0;
  std::string scheme = "rk4";

  int n_particles() const { return static_cast<int>(cloud.points.size()); }
  int n_escaped() const;
  const std::vector<Vec2>& final_positions() const { return positions.back(); }
};

/// Classical fixed-step 4th-order integration of every particle; the last
/// step is shortened to land on T exactly. Particles leaving eval_box are
/// frozen and flagged.
ParticleFlow integrate_flow(const FieldSpec& spec, const ParticleCloud& cloud, double t0,
                            double T, double dt, const Box& eval_box, int store_every = 1,
                            int threads = 1);

/// Empirical compressibility: max over stored times and histogram cells of
/// (particles in cell * h_p^2) / cell volume. Cells with too few particles on
/// average are flagged through under_resolved.
double compressibility(const ParticleFlow& flow, const Box& cells_box, int cells_n,
                       bool* under_resolved = nullptr);

struct SublevelReport {
  std::vector<uint8_t> in_sublevel;  // |X(t)| <= R at every stored time
  double measure_outside = 0.0;      // h_p^2 count of the complement
};
SublevelReport sublevel_GR(const ParticleFlow& flow, double R);

struct JacobianTrack {
  std::vector<std::vector<double>> jx_exp;  // exp of the divergence integral
  std::vector<std::vector<double>> det_fd;  // NaN where a neighbor escaped or on the rim
};

/// Exponential Jacobian by trapezoid on div B along each trajectory, against
/// the determinant of lattice finite differences.
JacobianTrack jacobian_track(const FieldSpec& spec, const ParticleFlow& flow);

/// max over particles of |X(t+s, x) - X(t, X(s, x))| for an autonomous field,
/// with the inner value bilinearly interpolated on the lattice flow map.
double semigroup_residual(const FieldSpec& spec, const ParticleCloud& cloud, double s, double t,
                          double dt, const Box& eval_box);

enum class BranchRule { A, B };

/// Exact region-wise characteristics of the non-uniqueness field. Rule A
/// continues straight through the origin (ray slope kept), rule B mirrors the
/// slope; both preserve Lebesgue measure.
Vec2 counterexample_position(Vec2 x0, double t, BranchRule rule);
Vec2 counterexample_velocity(Vec2 x0, double t, BranchRule rule);
/// Time at which the trajectory passes through the origin, or +inf.
double counterexample_collision_time(Vec2 x0);

ParticleFlow counterexample_flows(const ParticleCloud& cloud, double T, BranchRule rule,
                                  int store_steps = 64);

}  // namespace flowlab
