#pragma once

#include "polyreal/automorphisms.hpp"
#include "polyreal/complex.hpp"
#include "polyreal/driver.hpp"
#include "polyreal/exactgeom.hpp"
#include "polyreal/io.hpp"
#include "polyreal/objective.hpp"
#include "polyreal/obstruction.hpp"
#include "polyreal/rng.hpp"
#include "polyreal/search.hpp"
#include "polyreal/symmetry.hpp"
