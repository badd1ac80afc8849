#pragma once

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qorder
{

/*!
 * Adaptive Gauss-Kronrod (G15/K31) panel quadrature on a finite interval.
 *
 * Throws std::runtime_error if the estimated error misses the tolerance.
 */
template<class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-8)
{
    double error = 0;
    double l1 = 0;
    double const value
        = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, a, b, 20, rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > 10 * rel_tol * l1 + 1e-300)
    {
        throw std::runtime_error("integrate: quadrature failed to converge");
    }
    return value;
}

}  // namespace qorder
