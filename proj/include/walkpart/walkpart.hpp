#pragma once

#include "walkpart/common.hpp"
#include "walkpart/graph.hpp"
#include "walkpart/metrics.hpp"
#include "walkpart/partition.hpp"
#include "walkpart/rng.hpp"
#include "walkpart/tables.hpp"
#include "walkpart/walk.hpp"
