#pragma once

#include "qorder/accuracy.hpp"
#include "qorder/specfun/bessel.hpp"
#include "qorder/specfun/dirichlet.hpp"
#include "qorder/specfun/faddeeva.hpp"
