#pragma once

#include "qorder/dynamics/checkpoint.hpp"
#include "qorder/dynamics/grid.hpp"
#include "qorder/dynamics/mapping.hpp"
#include "qorder/dynamics/mask.hpp"
#include "qorder/dynamics/observables.hpp"
#include "qorder/dynamics/propagator.hpp"
