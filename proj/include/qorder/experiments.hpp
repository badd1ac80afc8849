#pragma once

#include "qorder/experiments/coincidence.hpp"
#include "qorder/experiments/manifest.hpp"
#include "qorder/experiments/microscope.hpp"
#include "qorder/experiments/order.hpp"
#include "qorder/experiments/report.hpp"
#include "qorder/experiments/table.hpp"
