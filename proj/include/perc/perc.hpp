#pragma once

// Umbrella header: the full simulation library.

#include "perc/bounds.hpp"
#include "perc/classify.hpp"
#include "perc/config.hpp"
#include "perc/crossing.hpp"
#include "perc/engine.hpp"
#include "perc/environment.hpp"
#include "perc/estimate.hpp"
#include "perc/geometry.hpp"
#include "perc/hexagon.hpp"
#include "perc/io.hpp"
#include "perc/lattice.hpp"
#include "perc/manhattan.hpp"
#include "perc/mark_distribution.hpp"
#include "perc/models.hpp"
#include "perc/path_loss.hpp"
#include "perc/point_process.hpp"
#include "perc/quadrature.hpp"
#include "perc/rng.hpp"
#include "perc/runner.hpp"
#include "perc/segment_system.hpp"
#include "perc/shot_noise.hpp"
#include "perc/spatial_graph.hpp"
#include "perc/spatial_grid.hpp"
#include "perc/union_find.hpp"
#include "perc/version.hpp"
#include "perc/voronoi.hpp"
