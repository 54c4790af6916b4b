#pragma once

#include "photorc/butterworth.hpp"
#include "photorc/cmaes.hpp"
#include "photorc/cmaes_training.hpp"
#include "photorc/config.hpp"
#include "photorc/core.hpp"
#include "photorc/detector.hpp"
#include "photorc/harness.hpp"
#include "photorc/metrics.hpp"
#include "photorc/readout.hpp"
#include "photorc/reservoir.hpp"
#include "photorc/ridge.hpp"
#include "photorc/signal.hpp"
#include "photorc/stateest.hpp"
#include "photorc/topology.hpp"
