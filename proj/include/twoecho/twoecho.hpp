#pragma once

#include "twoecho/baseline.hpp"
#include "twoecho/construct.hpp"
#include "twoecho/exact.hpp"
#include "twoecho/grasp.hpp"
#include "twoecho/instancegen.hpp"
#include "twoecho/io.hpp"
#include "twoecho/localsearch.hpp"
#include "twoecho/milp.hpp"
#include "twoecho/model.hpp"
#include "twoecho/rng.hpp"
#include "twoecho/search_state.hpp"
#include "twoecho/tsp.hpp"
