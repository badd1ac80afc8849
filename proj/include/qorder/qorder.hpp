#pragma once

#include "qorder/disk.hpp"
#include "qorder/dynamics.hpp"
#include "qorder/experiments.hpp"
#include "qorder/halfplane.hpp"
#include "qorder/specfun.hpp"
