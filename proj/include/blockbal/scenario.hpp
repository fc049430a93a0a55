#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "blockbal/estimator.hpp"
#include "blockbal/grid.hpp"

namespace blockbal {

using Vec3 = std::array<double, 3>;

/// Half-space obstacle. The normal points out of the solid, into the fluid;
/// a point x is solid iff dot(x - point, normal) < 0.
struct Plane {
   Vec3 point{};
   Vec3 normal{};
};

/// All lengths in cell units, all times in simulation steps.
struct ScenarioConfig {
   GridDims dims{};
   int block_size = 32;

   double particle_diameter = 10.0;        // D, cells
   double solid_volume_fraction = 0.2;     // target phi; ignored if particle_count >= 0
   std::int64_t particle_count = -1;       // explicit count overrides phi
   double settling_fraction = 0.05;        // u_s as a fraction of the lattice speed (1 cell/step)
   int sub_cycles = 10;                    // S
   double top_wall_offset = 0.0;           // o_t, cells below the lattice top; 0 = no top wall
   std::vector<Plane> obstacles;           // includes the top wall when present
   double init_region_lo = 0.0;            // initial placement band, fraction of fluid height
   double init_region_hi = 1.0;
   std::int64_t duration = 0;              // steps
   std::uint64_t seed = 1;

   // Physical metadata only; the kinematic model does not consume these.
   double galileo_number = 30.0;
   double density_ratio = 2.5;
   double gravity = 1.0;
   double viscosity = 1.0;

   double settling_speed() const { return settling_fraction; }  // cells per step
   Vec3 extents() const;
   double fluid_height() const;  // cells, below the top wall
};

struct Sphere {
   Vec3 center{};
   double diameter = 0.0;
   Vec3 velocity{};
   bool settled = false;
};

struct ParticleScene {
   Vec3 extents{};
   std::vector<Sphere> spheres;
   std::vector<Plane> planes;
   double settling_speed = 0.0;  // cells per step
   double overlap_tol = 0.05;    // tolerated overlap, fraction of the diameter
};

ScenarioConfig make_preset(std::string_view name, double scale);
/// Same preset geometry built around a non-default block size, as in the
/// multi-size calibration sweep.
ScenarioConfig make_preset(std::string_view name, double scale, int block_size);
void validate_config(const ScenarioConfig& config);

/// Seeded rejection-sampled non-overlapping placement inside the configured
/// initial band. Throws InfeasibleConfiguration when the band cannot host
/// the requested packing.
struct InfeasibleConfiguration : std::runtime_error {
   using std::runtime_error::runtime_error;
};

ParticleScene init_scene(const ScenarioConfig& config);

/// Advances the kinematic settling model by dt unit steps: spheres descend
/// at the settling speed damped by local crowding, stop on the floor, on
/// obstacle planes, or on a settled sphere below, and overlaps are pushed
/// apart along center lines. No sphere ever ends a step above its height at
/// the start of that step.
ParticleScene step_scene(const ParticleScene& scene, std::int64_t dt);

/// Flags cells against spheres and obstacle half-spaces (cell-center test)
/// and gathers the per-block quantities; near-boundary cells are fluid cells
/// with a solid neighbor along one of the 18 D3Q19 stencil directions.
/// Caches the static obstacle flags, so reuse one extractor per run.
class QuantityExtractor {
 public:
   QuantityExtractor(const BlockGrid& grid, const ScenarioConfig& config);

   std::vector<BlockQuantities> extract(const ParticleScene& scene) const;

 private:
   const BlockGrid& grid_;
   int sub_cycles_;
   std::array<std::int64_t, 3> cells_{};
   std::vector<Plane> static_planes_;
   std::vector<std::uint8_t> static_solid_;
   std::vector<std::uint8_t> static_near_boundary_;
   std::vector<std::int64_t> static_fluid_count_;
   std::vector<std::int64_t> static_nb_count_;

   std::size_t cell_index(std::int64_t cx, std::int64_t cy, std::int64_t cz) const;
   BlockId block_of_cell(std::int64_t cx, std::int64_t cy, std::int64_t cz) const;
};

std::vector<BlockQuantities> extract_block_quantities(const ParticleScene& scene,
                                                      const BlockGrid& grid,
                                                      const ScenarioConfig& config);

/// Synthetic measurements m_X = max(0, wl_X(q, truth) * (1 + eps)) with
/// eps ~ N(0, noise_sigma) drawn independently per part; deterministic for a
/// fixed seed. Quantities are consumed in block-id order.
std::vector<TimingSample> synthesize_timings(const std::vector<BlockQuantities>& quantities,
                                             const EstimatorCoefficients& truth,
                                             double noise_sigma, std::uint64_t seed);

}  // namespace blockbal
