#pragma once

#include "graphmix/contingency.hpp"
#include "graphmix/edge_model.hpp"
#include "graphmix/error.hpp"
#include "graphmix/gelman_rubin.hpp"
#include "graphmix/graph.hpp"
#include "graphmix/independence.hpp"
#include "graphmix/metrics.hpp"
#include "graphmix/normal.hpp"
#include "graphmix/parallel.hpp"
#include "graphmix/random.hpp"
#include "graphmix/rewire.hpp"
#include "graphmix/series.hpp"
#include "graphmix/version.hpp"
