#pragma once

// Seeded fixture worlds: small hand-shaped rooms plus forest- and
// tunnel-style generators at the 50x50 m and 120x53 m scales.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "topoexp/geometry.hpp"
#include "topoexp/world.hpp"

namespace topoexp {

struct Fixture {
  WorldMap world;
  Vec3 start;
};

// Axis-aligned rectangle in world metres, [x0, x1) x [y0, y1).
struct Rect {
  double x0, y0, x1, y1;
};

// Mutable occupancy raster used to compose fixtures. Shapes mark every cell
// whose centre lies inside them.
class GridBuilder {
 public:
  GridBuilder(double width_m, double height_m, double resolution, bool fill_occupied);

  void set_rect(const Rect& r, bool occupied);
  void set_disc(double cx, double cy, double radius, bool occupied);
  void close_boundary();
  WorldMap build(double ceiling_height) const;

 private:
  double resolution_;
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
};

// Square room of `side` metres interior with 0.1 m walls; start at the centre.
Fixture make_sealed_room(double side = 6.0, double resolution = 0.1);

// Straight corridor along x, open ends beyond sensing range of the start.
Fixture make_corridor(double length = 40.0, double width = 3.0, double resolution = 0.1);

// Two rooms joined by a doorway in a shared wall.
Fixture make_two_room(double resolution = 0.1);

Fixture make_l_shape(double resolution = 0.1);

// Room with 2 m thick walls, used for the in-wall frontier scenario.
Fixture make_thick_wall_room(double resolution = 0.1);

// 50 x 50 m with randomly placed circular trunks.
Fixture generate_forest(std::uint64_t seed, double resolution = 0.1);

// 120 x 53 m network of corridors and chambers carved out of rock. All
// geometry lies on a 0.1 m lattice so halving the resolution keeps it exact.
Fixture generate_tunnel(std::uint64_t seed, double resolution = 0.1);

// Dispatch by name: sealed-room, corridor, two-room, l-shape, thick-wall,
// forest, tunnel. Throws ConfigError for unknown names.
Fixture make_fixture(std::string_view kind, std::uint64_t seed, double resolution);

std::vector<std::string> fixture_kinds();

}  // namespace topoexp
