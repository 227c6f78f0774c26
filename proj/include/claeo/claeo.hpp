#pragma once

#include "claeo/basis.hpp"
#include "claeo/benchmark.hpp"
#include "claeo/config.hpp"
#include "claeo/history_stack.hpp"
#include "claeo/learner.hpp"
#include "claeo/observer.hpp"
#include "claeo/plant.hpp"
#include "claeo/saturation.hpp"
#include "claeo/scenarios.hpp"
#include "claeo/simulator.hpp"
#include "claeo/trace_io.hpp"
