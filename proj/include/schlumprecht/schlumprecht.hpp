#pragma once

#include "schlumprecht/analysis.hpp"
#include "schlumprecht/brute_force.hpp"
#include "schlumprecht/cache.hpp"
#include "schlumprecht/constructions.hpp"
#include "schlumprecht/io.hpp"
#include "schlumprecht/norm.hpp"
#include "schlumprecht/rng.hpp"
#include "schlumprecht/sparse_vector.hpp"
#include "schlumprecht/suites.hpp"
