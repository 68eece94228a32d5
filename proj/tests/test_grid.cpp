#include <doctest.h>

#include "terra/grid.hpp"
#include "terra/rng.hpp"

using namespace terra;

namespace {
GridConfig grid_50() {
  GridConfig g;
  g.width = 50;
  g.height = 50;
  g.perception_radius = 6;
  return g;
}
}  // namespace

TEST_CASE("wrap handles negatives and full turns") {
  GridConfig g = grid_50();
  CHECK(wrap(51, -1, g) == Position{1, 49});
  CHECK(wrap(0, 0, g) == Position{0, 0});
  CHECK(wrap(100, 100, g) == Position{0, 0});
  CHECK(wrap(-51, -101, g) == Position{49, 49});
}

TEST_CASE("wrap is idempotent") {
  GridConfig g = grid_50();
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    long long x = static_cast<long long>(rng.uniform_int(-1000, 1000));
    long long y = static_cast<long long>(rng.uniform_int(-1000, 1000));
    Position once = wrap(x, y, g);
    CHECK(wrap(once.x, once.y, g) == once);
  }
}

TEST_CASE("toroidal distance is symmetric on small grids") {
  for (int w = 2; w <= 10; ++w) {
    GridConfig g;
    g.width = w;
    g.height = w;
    g.perception_radius = 0;
    for (int ax = 0; ax < w; ++ax)
      for (int ay = 0; ay < w; ++ay)
        for (int bx = 0; bx < w; ++bx)
          for (int by = 0; by < w; ++by) {
            Position a{ax, ay}, b{bx, by};
            CHECK(chebyshev(a, b, g) == chebyshev(b, a, g));
          }
  }
}

TEST_CASE("neighborhood sizes") {
  GridConfig g = grid_50();
  Position c{10, 10};
  CHECK(neighborhood(c, 0, g) == std::vector<Position>{c});
  CHECK(neighborhood(c, 1, g).size() == 9);
  auto cells = neighborhood(c, 6, g);
  CHECK(cells.size() == 169);
  // radius-6 extremes from the observation wire format
  CHECK(std::count(cells.begin(), cells.end(), wrap(10 + 4, 10 + 6, g)) == 1);
  CHECK(std::count(cells.begin(), cells.end(), wrap(10 - 3, 10 - 4, g)) == 1);
  CHECK(std::count(cells.begin(), cells.end(), wrap(10 + 7, 10, g)) == 0);
}

TEST_CASE("neighborhood wraps over edges") {
  GridConfig g = grid_50();
  auto cells = neighborhood({0, 0}, 2, g);
  CHECK(cells.size() == 25);
  CHECK(std::count(cells.begin(), cells.end(), Position{48, 48}) == 1);
}

TEST_CASE("config validation rejects bad shapes") {
  GridConfig g = grid_50();
  g.width = 5;  // smaller than 2r+1
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = grid_50();
  g.food_value_min = 3;
  g.food_value_max = 2;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = grid_50();
  g.food_decay_prob = 1.5;
  CHECK_THROWS_AS(g.validate(), ConfigError);
}
