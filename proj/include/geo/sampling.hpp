#pragma once

#include "geo/base.hpp"

namespace geo {

// m equally spaced unit directions on the circle (2 x m).
Mat circle_grid(int m);

// Unit directions from a subdivided icosahedron (3 x v, v = 10*4^level + 2).
Mat icosphere(int level);

// m uniform random unit directions (n x m).
Mat random_directions(int n, int m, Rng& rng);

}  // namespace geo
