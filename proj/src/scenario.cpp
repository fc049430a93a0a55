#include "blockbal/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace blockbal {

namespace {

constexpr double kPi = 3.14159265358979323846;

// D3Q19 stencil directions (6 axis + 12 edge diagonals).
constexpr std::array<std::array<int, 3>, 18> kStencil = {{
   {1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0}, {0, 0, 1},  {0, 0, -1},
   {1, 1, 0},  {1, -1, 0}, {-1, 1, 0}, {-1, -1, 0},
   {1, 0, 1},  {1, 0, -1}, {-1, 0, 1}, {-1, 0, -1},
   {0, 1, 1},  {0, 1, -1}, {0, -1, 1}, {0, -1, -1},
}};

double sq(double v) { return v * v; }

double distance(const Vec3& a, const Vec3& b) {
   return std::sqrt(sq(a[0] - b[0]) + sq(a[1] - b[1]) + sq(a[2] - b[2]));
}

double signed_plane_distance(const Plane& plane, const Vec3& x) {
   return (x[0] - plane.point[0]) * plane.normal[0] + (x[1] - plane.point[1]) * plane.normal[1] +
          (x[2] - plane.point[2]) * plane.normal[2];
}

// Deterministic uniform/gaussian draws independent of the standard library's
// distribution internals, so seeded runs replay bit-for-bit everywhere.
class Rng {
 public:
   explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

   std::uint64_t next_u64() {
      // xorshift* generator
      std::uint64_t x = state_;
      x ^= x >> 12;
      x ^= x << 25;
      x ^= x >> 27;
      state_ = x;
      return x * 0x2545f4914f6cdd1dull;
   }

   double uniform01() {  // in (0, 1]
      return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
   }

   double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

   double gaussian() {
      const double u1 = uniform01();
      const double u2 = uniform01();
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
   }

 private:
   std::uint64_t state_;
};

// Uniform-grid neighbor lookup over sphere centers.
class SpatialHash {
 public:
   SpatialHash(const std::vector<Sphere>& spheres, double cell_size)
      : spheres_(spheres), cell_(cell_size > 0.0 ? cell_size : 1.0) {
      buckets_.reserve(spheres.size());
      for (std::size_t i = 0; i < spheres.size(); ++i)
         buckets_[key_of(spheres[i].center)].push_back(i);
   }

   template <typename Fn>
   void for_neighbors(const Vec3& x, Fn&& fn) const {
      const auto [gx, gy, gz] = grid_of(x);
      for (std::int64_t dz = -1; dz <= 1; ++dz)
         for (std::int64_t dy = -1; dy <= 1; ++dy)
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
               const auto it = buckets_.find(pack(gx + dx, gy + dy, gz + dz));
               if (it == buckets_.end())
                  continue;
               for (std::size_t idx : it->second)
                  fn(idx);
            }
   }

 private:
   std::array<std::int64_t, 3> grid_of(const Vec3& x) const {
      return {static_cast<std::int64_t>(std::floor(x[0] / cell_)),
              static_cast<std::int64_t>(std::floor(x[1] / cell_)),
              static_cast<std::int64_t>(std::floor(x[2] / cell_))};
   }
   static std::int64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
      return ((x & 0xfffff) << 40) | ((y & 0xfffff) << 20) | (z & 0xfffff);
   }
   std::int64_t key_of(const Vec3& x) const {
      const auto [gx, gy, gz] = grid_of(x);
      return pack(gx, gy, gz);
   }

   const std::vector<Sphere>& spheres_;
   double cell_;
   std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets_;
};

int scaled_dim(int base, double scale) {
   return std::max(1, static_cast<int>(std::ceil(base * scale)));
}

}  // namespace

Vec3 ScenarioConfig::extents() const {
   const double b = block_size;
   return {dims.x * b, dims.y * b, dims.z * b};
}

double ScenarioConfig::fluid_height() const {
   return dims.z * static_cast<double>(block_size) - top_wall_offset;
}

void validate_config(const ScenarioConfig& config) {
   if (config.dims.x < 1 || config.dims.y < 1 || config.dims.z < 1 || config.block_size < 1)
      throw std::invalid_argument("scenario grid dimensions must be >= 1");
   if (config.particle_diameter < 2.0)
      throw std::invalid_argument("particle diameter must be >= 2 cells");
   if (config.particle_count < 0 &&
       (!(config.solid_volume_fraction > 0.0) || config.solid_volume_fraction > 0.64))
      throw std::invalid_argument("solid volume fraction must lie in (0, 0.64]");
   if (!(config.settling_fraction > 0.0))
      throw std::invalid_argument("settling speed must be positive");
   if (config.sub_cycles < 1)
      throw std::invalid_argument("sub cycle count must be >= 1");
   if (config.duration < 0)
      throw std::invalid_argument("duration must be >= 0");
   if (!(config.init_region_lo >= 0.0 && config.init_region_lo <= config.init_region_hi &&
         config.init_region_hi <= 1.0))
      throw std::invalid_argument("initial placement band must satisfy 0 <= lo <= hi <= 1");
}

ScenarioConfig make_preset(std::string_view name, double scale) {
   return make_preset(name, scale, 32);
}

ScenarioConfig make_preset(std::string_view name, double scale, int block_size) {
   if (!(scale > 0.0 && scale <= 1.0))
      throw std::invalid_argument("preset scale must lie in (0, 1]");
   if (block_size < 1)
      throw std::invalid_argument("block size must be >= 1");

   ScenarioConfig config;
   if (name == "settling-box") {
      config.dims = {scaled_dim(4, scale), scaled_dim(4, scale), scaled_dim(5, scale)};
      config.block_size = block_size;
      config.particle_diameter = 10.0;
      config.solid_volume_fraction = 0.2;
      config.particle_count = -1;
      config.settling_fraction = 0.05;
      config.sub_cycles = 10;
      config.top_wall_offset = 1.05 * config.block_size;
      config.galileo_number = 30.0;
      config.density_ratio = 2.5;
      const Vec3 ext = config.extents();
      config.obstacles.push_back(
         Plane{{0.0, 0.0, ext[2] - config.top_wall_offset}, {0.0, 0.0, -1.0}});
   } else if (name == "hopper") {
      config.dims = {scaled_dim(12, scale), scaled_dim(12, scale), scaled_dim(16, scale)};
      config.block_size = block_size;
      config.particle_diameter = 15.0;
      const double volume_ratio = std::pow(scale * block_size / 32.0, 3);
      config.particle_count = std::llround(4300.0 * volume_ratio);
      config.solid_volume_fraction = 0.1;
      config.settling_fraction = 0.05;
      config.sub_cycles = 10;
      config.top_wall_offset = 0.0;
      config.galileo_number = 50.0;
      config.density_ratio = 1.5;
      config.init_region_lo = 0.70;
      config.init_region_hi = 1.0;

      // Four inclined walls shrink the horizontal cross section by 60%
      // towards the bottom plane.
      const Vec3 ext = config.extents();
      const double shrink = std::sqrt(0.4);
      const double inset_x = 0.5 * (1.0 - shrink) * ext[0];
      const double inset_y = 0.5 * (1.0 - shrink) * ext[1];
      auto unit = [](Vec3 v) {
         const double n = std::sqrt(sq(v[0]) + sq(v[1]) + sq(v[2]));
         return Vec3{v[0] / n, v[1] / n, v[2] / n};
      };
      config.obstacles.push_back(Plane{{inset_x, 0.0, 0.0}, unit({ext[2], 0.0, inset_x})});
      config.obstacles.push_back(
         Plane{{ext[0] - inset_x, 0.0, 0.0}, unit({-ext[2], 0.0, inset_x})});
      config.obstacles.push_back(Plane{{0.0, inset_y, 0.0}, unit({0.0, ext[2], inset_y})});
      config.obstacles.push_back(
         Plane{{0.0, ext[1] - inset_y, 0.0}, unit({0.0, -ext[2], inset_y})});
   } else {
      throw std::invalid_argument("unknown preset '" + std::string(name) +
                                  "' (expected settling-box or hopper)");
   }

   const double steps_per_pass = config.fluid_height() / config.settling_speed();
   config.duration = static_cast<std::int64_t>(std::ceil(2.5 * steps_per_pass));
   validate_config(config);
   return config;
}

ParticleScene init_scene(const ScenarioConfig& config) {
   validate_config(config);

   ParticleScene scene;
   scene.extents = config.extents();
   scene.planes = config.obstacles;
   scene.settling_speed = config.settling_speed();

   const double d = config.particle_diameter;
   const double r = 0.5 * d;
   const double height = config.fluid_height();
   if (height <= d)
      throw InfeasibleConfiguration("fluid region shorter than one particle diameter");

   std::int64_t count = config.particle_count;
   if (count < 0) {
      const double fluid_volume = scene.extents[0] * scene.extents[1] * height;
      const double sphere_volume = kPi / 6.0 * d * d * d;
      count = std::llround(config.solid_volume_fraction * fluid_volume / sphere_volume);
   }
   if (count == 0)
      return scene;

   const double lo_z = std::max(r, config.init_region_lo * height);
   const double hi_z = std::min(height - r, config.init_region_hi * height - 0.0);
   if (hi_z < lo_z)
      throw InfeasibleConfiguration("initial placement band is empty");

   Rng rng(config.seed);
   scene.spheres.reserve(static_cast<std::size_t>(count));
   const std::int64_t max_attempts = 2000 * count + 2000;
   std::int64_t attempts = 0;
   while (static_cast<std::int64_t>(scene.spheres.size()) < count) {
      if (++attempts > max_attempts)
         throw InfeasibleConfiguration("sphere placement failed after " +
                                       std::to_string(max_attempts) + " attempts");
      Vec3 c = {rng.uniform(r, scene.extents[0] - r), rng.uniform(r, scene.extents[1] - r),
                rng.uniform(lo_z, hi_z)};
      bool ok = true;
      for (const Plane& plane : scene.planes) {
         if (signed_plane_distance(plane, c) < r) {
            ok = false;
            break;
         }
      }
      if (!ok)
         continue;
      for (const Sphere& s : scene.spheres) {
         if (distance(s.center, c) < 0.5 * (s.diameter + d)) {
            ok = false;
            break;
         }
      }
      if (!ok)
         continue;
      scene.spheres.push_back(Sphere{c, d, {0.0, 0.0, 0.0}, false});
   }
   return scene;
}

ParticleScene step_scene(const ParticleScene& scene, std::int64_t dt) {
   if (dt <= 0)
      throw std::invalid_argument("dt must be positive");

   ParticleScene out = scene;
   const double u_s = out.settling_speed;

   for (std::int64_t step = 0; step < dt; ++step) {
      bool any_unsettled = false;
      for (const Sphere& s : out.spheres)
         if (!s.settled) {
            any_unsettled = true;
            break;
         }
      if (!any_unsettled)
         break;  // fixed point

      double max_d = 0.0;
      for (const Sphere& s : out.spheres)
         max_d = std::max(max_d, s.diameter);
      const SpatialHash hash(out.spheres, 1.5 * max_d);

      for (std::size_t i = 0; i < out.spheres.size(); ++i) {
         Sphere& sphere = out.spheres[i];
         if (sphere.settled)
            continue;
         const double r = 0.5 * sphere.diameter;
         const double z_pre = sphere.center[2];

         int crowd = 0;
         hash.for_neighbors(sphere.center, [&](std::size_t j) {
            if (j != i && distance(out.spheres[j].center, sphere.center) < 1.5 * sphere.diameter)
               ++crowd;
         });
         const double speed = u_s / (1.0 + 0.5 * crowd);
         sphere.center[2] -= speed;
         sphere.velocity = {0.0, 0.0, -speed};

         if (sphere.center[2] < r) {
            sphere.center[2] = r;
            sphere.settled = true;
         }
         for (const Plane& plane : out.planes) {
            const double sd = signed_plane_distance(plane, sphere.center);
            if (sd < r) {
               for (int a = 0; a < 3; ++a)
                  sphere.center[a] += (r - sd) * plane.normal[a];
               sphere.settled = true;
            }
         }

         // Push out of overlapping spheres along the center line; rest on a
         // settled sphere below.
         hash.for_neighbors(sphere.center, [&](std::size_t j) {
            if (j == i)
               return;
            const Sphere& other = out.spheres[j];
            const double contact = 0.5 * (sphere.diameter + other.diameter);
            const double dist = distance(sphere.center, other.center);
            if (dist >= contact)
               return;
            if (other.settled && other.center[2] < sphere.center[2])
               sphere.settled = true;
            const double allowed = contact * (1.0 - out.overlap_tol);
            if (dist < allowed) {
               Vec3 dir = {1.0, 0.0, 0.0};
               if (dist > 1e-12) {
                  for (int a = 0; a < 3; ++a)
                     dir[a] = (sphere.center[a] - other.center[a]) / dist;
               }
               const double push = allowed - dist;
               for (int a = 0; a < 3; ++a)
                  sphere.center[a] += push * dir[a];
            }
         });

         // A sphere never ends a step above where it started it; together
         // with the descent this keeps total potential height non-increasing.
         sphere.center[2] = std::min(sphere.center[2], z_pre);
         sphere.center[0] = std::clamp(sphere.center[0], r, out.extents[0] - r);
         sphere.center[1] = std::clamp(sphere.center[1], r, out.extents[1] - r);
         sphere.center[2] = std::clamp(sphere.center[2], r, out.extents[2] - r);
         if (sphere.settled)
            sphere.velocity = {0.0, 0.0, 0.0};
      }
   }
   return out;
}

QuantityExtractor::QuantityExtractor(const BlockGrid& grid, const ScenarioConfig& config)
   : grid_(grid), sub_cycles_(config.sub_cycles), static_planes_(config.obstacles) {
   if (!(grid.dims() == config.dims) || grid.block_size() != config.block_size)
      throw std::invalid_argument("grid does not match scenario configuration");

   const int b = grid.block_size();
   cells_ = {static_cast<std::int64_t>(grid.dims().x) * b,
             static_cast<std::int64_t>(grid.dims().y) * b,
             static_cast<std::int64_t>(grid.dims().z) * b};
   const std::int64_t total = cells_[0] * cells_[1] * cells_[2];
   static_solid_.assign(static_cast<std::size_t>(total), 0);
   static_near_boundary_.assign(static_cast<std::size_t>(total), 0);
   static_fluid_count_.assign(static_cast<std::size_t>(grid.block_count()), 0);
   static_nb_count_.assign(static_cast<std::size_t>(grid.block_count()), 0);

   for (std::int64_t cz = 0; cz < cells_[2]; ++cz) {
      for (std::int64_t cy = 0; cy < cells_[1]; ++cy) {
         for (std::int64_t cx = 0; cx < cells_[0]; ++cx) {
            const Vec3 center = {cx + 0.5, cy + 0.5, cz + 0.5};
            for (const Plane& plane : static_planes_) {
               if (signed_plane_distance(plane, center) < 0.0) {
                  static_solid_[cell_index(cx, cy, cz)] = 1;
                  break;
               }
            }
         }
      }
   }
   for (std::int64_t cz = 0; cz < cells_[2]; ++cz) {
      for (std::int64_t cy = 0; cy < cells_[1]; ++cy) {
         for (std::int64_t cx = 0; cx < cells_[0]; ++cx) {
            const std::size_t idx = cell_index(cx, cy, cz);
            const BlockId block = block_of_cell(cx, cy, cz);
            if (static_solid_[idx])
               continue;
            ++static_fluid_count_[static_cast<std::size_t>(block)];
            for (const auto& dir : kStencil) {
               const std::int64_t nx = cx + dir[0], ny = cy + dir[1], nz = cz + dir[2];
               if (nx < 0 || nx >= cells_[0] || ny < 0 || ny >= cells_[1] || nz < 0 ||
                   nz >= cells_[2])
                  continue;
               if (static_solid_[cell_index(nx, ny, nz)]) {
                  static_near_boundary_[idx] = 1;
                  ++static_nb_count_[static_cast<std::size_t>(block)];
                  break;
               }
            }
         }
      }
   }
}

std::size_t QuantityExtractor::cell_index(std::int64_t cx, std::int64_t cy, std::int64_t cz) const {
   return static_cast<std::size_t>((cz * cells_[1] + cy) * cells_[0] + cx);
}

BlockId QuantityExtractor::block_of_cell(std::int64_t cx, std::int64_t cy, std::int64_t cz) const {
   const int b = grid_.block_size();
   return grid_.block_id(static_cast<int>(cx / b), static_cast<int>(cy / b),
                         static_cast<int>(cz / b));
}

std::vector<BlockQuantities> QuantityExtractor::extract(const ParticleScene& scene) const {
   for (int a = 0; a < 3; ++a)
      if (std::abs(scene.extents[a] - static_cast<double>(cells_[a])) > 1e-9)
         throw std::invalid_argument("scene extents do not match the grid");

   const std::int64_t n_blocks = grid_.block_count();
   std::vector<BlockQuantities> result(static_cast<std::size_t>(n_blocks));
   for (BlockId b = 0; b < n_blocks; ++b) {
      auto& q = result[static_cast<std::size_t>(b)];
      q.cells = grid_.cells_per_block();
      q.fluid_cells = static_fluid_count_[static_cast<std::size_t>(b)];
      q.near_boundary_cells = static_nb_count_[static_cast<std::size_t>(b)];
      q.sub_cycles = sub_cycles_;
   }

   // Cell marks this snapshot: 1 = solid from a sphere, 2 = fluid cell that
   // became near-boundary only because of a sphere.
   std::vector<std::uint8_t> mark(static_solid_.size(), 0);
   std::vector<std::array<std::int64_t, 3>> sphere_cells;

   for (const Sphere& sphere : scene.spheres) {
      const double r = 0.5 * sphere.diameter;
      const std::int64_t x0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(sphere.center[0] - r)) - 1);
      const std::int64_t y0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(sphere.center[1] - r)) - 1);
      const std::int64_t z0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(sphere.center[2] - r)) - 1);
      const std::int64_t x1 = std::min<std::int64_t>(cells_[0] - 1, static_cast<std::int64_t>(std::ceil(sphere.center[0] + r)));
      const std::int64_t y1 = std::min<std::int64_t>(cells_[1] - 1, static_cast<std::int64_t>(std::ceil(sphere.center[1] + r)));
      const std::int64_t z1 = std::min<std::int64_t>(cells_[2] - 1, static_cast<std::int64_t>(std::ceil(sphere.center[2] + r)));
      for (std::int64_t cz = z0; cz <= z1; ++cz) {
         for (std::int64_t cy = y0; cy <= y1; ++cy) {
            for (std::int64_t cx = x0; cx <= x1; ++cx) {
               const double dx = cx + 0.5 - sphere.center[0];
               const double dy = cy + 0.5 - sphere.center[1];
               const double dz = cz + 0.5 - sphere.center[2];
               if (dx * dx + dy * dy + dz * dz >= r * r)
                  continue;
               const std::size_t idx = cell_index(cx, cy, cz);
               if (mark[idx] == 1)
                  continue;
               mark[idx] = 1;
               sphere_cells.push_back({cx, cy, cz});
               if (!static_solid_[idx]) {
                  const BlockId block = block_of_cell(cx, cy, cz);
                  --result[static_cast<std::size_t>(block)].fluid_cells;
                  if (static_near_boundary_[idx])
                     --result[static_cast<std::size_t>(block)].near_boundary_cells;
               }
            }
         }
      }
   }

   for (const auto& [cx, cy, cz] : sphere_cells) {
      for (const auto& dir : kStencil) {
         const std::int64_t nx = cx + dir[0], ny = cy + dir[1], nz = cz + dir[2];
         if (nx < 0 || nx >= cells_[0] || ny < 0 || ny >= cells_[1] || nz < 0 || nz >= cells_[2])
            continue;
         const std::size_t idx = cell_index(nx, ny, nz);
         if (static_solid_[idx] || mark[idx] != 0 || static_near_boundary_[idx])
            continue;
         mark[idx] = 2;
         ++result[static_cast<std::size_t>(block_of_cell(nx, ny, nz))].near_boundary_cells;
      }
   }

   // Particle counts: local by center, shadow by AABB overlap.
   const int b = grid_.block_size();
   auto block_axis = [&](double coord, int axis) {
      const int n = axis == 0 ? grid_.dims().x : axis == 1 ? grid_.dims().y : grid_.dims().z;
      return std::clamp(static_cast<int>(std::floor(coord / b)), 0, n - 1);
   };
   for (const Sphere& sphere : scene.spheres) {
      const int bi = block_axis(sphere.center[0], 0);
      const int bj = block_axis(sphere.center[1], 1);
      const int bk = block_axis(sphere.center[2], 2);
      const BlockId home = grid_.block_id(bi, bj, bk);
      ++result[static_cast<std::size_t>(home)].local_particles;

      const double r = 0.5 * sphere.diameter;
      const int i0 = block_axis(sphere.center[0] - r, 0), i1 = block_axis(sphere.center[0] + r, 0);
      const int j0 = block_axis(sphere.center[1] - r, 1), j1 = block_axis(sphere.center[1] + r, 1);
      const int k0 = block_axis(sphere.center[2] - r, 2), k1 = block_axis(sphere.center[2] + r, 2);
      for (int k = k0; k <= k1; ++k)
         for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
               const BlockId id = grid_.block_id(i, j, k);
               if (id != home)
                  ++result[static_cast<std::size_t>(id)].shadow_particles;
            }
   }

   // Contacts: overlapping pairs, attributed to the block holding the pair
   // midpoint.
   if (!scene.spheres.empty()) {
      double max_d = 0.0;
      for (const Sphere& s : scene.spheres)
         max_d = std::max(max_d, s.diameter);
      const SpatialHash hash(scene.spheres, max_d);
      for (std::size_t i = 0; i < scene.spheres.size(); ++i) {
         const Sphere& a = scene.spheres[i];
         hash.for_neighbors(a.center, [&](std::size_t j) {
            if (j <= i)
               return;
            const Sphere& other = scene.spheres[j];
            if (distance(a.center, other.center) >= 0.5 * (a.diameter + other.diameter))
               return;
            const Vec3 mid = {0.5 * (a.center[0] + other.center[0]),
                              0.5 * (a.center[1] + other.center[1]),
                              0.5 * (a.center[2] + other.center[2])};
            const BlockId id =
               grid_.block_id(block_axis(mid[0], 0), block_axis(mid[1], 1), block_axis(mid[2], 2));
            ++result[static_cast<std::size_t>(id)].contacts;
         });
      }
   }
   return result;
}

std::vector<BlockQuantities> extract_block_quantities(const ParticleScene& scene,
                                                      const BlockGrid& grid,
                                                      const ScenarioConfig& config) {
   return QuantityExtractor(grid, config).extract(scene);
}

std::vector<TimingSample> synthesize_timings(const std::vector<BlockQuantities>& quantities,
                                             const EstimatorCoefficients& truth,
                                             double noise_sigma, std::uint64_t seed) {
   if (noise_sigma < 0.0)
      throw std::invalid_argument("noise sigma must be >= 0");

   Rng rng(seed);
   std::vector<TimingSample> samples;
   samples.reserve(quantities.size());
   for (const BlockQuantities& q : quantities) {
      auto measure = [&](double workload) {
         const double eps = noise_sigma > 0.0 ? noise_sigma * rng.gaussian() : 0.0;
         return std::max(0.0, workload * (1.0 + eps));
      };
      TimingSample s;
      s.quantities = q;
      s.m_lbm = measure(wl_lbm(q, truth));
      s.m_bh = measure(wl_bh(q, truth));
      s.m_coup1 = measure(wl_coup1(q, truth));
      s.m_coup2 = measure(wl_coup2(q, truth));
      s.m_rb = measure(wl_rb(q, truth));
      samples.push_back(s);
   }
   return samples;
}

}  // namespace blockbal
