#pragma once

#include "mdgs/distributions.hpp"
#include "mdgs/error.hpp"
#include "mdgs/exact_oracle.hpp"
#include "mdgs/experiments.hpp"
#include "mdgs/ext_real.hpp"
#include "mdgs/generators.hpp"
#include "mdgs/graph.hpp"
#include "mdgs/json_io.hpp"
#include "mdgs/local_bracket.hpp"
#include "mdgs/parallel.hpp"
#include "mdgs/rde_population.hpp"
#include "mdgs/rng.hpp"
#include "mdgs/tree_solver.hpp"
