#pragma once

// Umbrella header for the whole library.

#include "maslov/convexity.hpp"
#include "maslov/document.hpp"
#include "maslov/error.hpp"
#include "maslov/functor.hpp"
#include "maslov/laws.hpp"
#include "maslov/measure.hpp"
#include "maslov/metric_space.hpp"
#include "maslov/metrics.hpp"
#include "maslov/monad.hpp"
#include "maslov/openness.hpp"
#include "maslov/random.hpp"
#include "maslov/space.hpp"
#include "maslov/weight.hpp"
