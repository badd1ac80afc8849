#pragma once

#include <cmath>

namespace qorder::specfun
{

/*!
 * Truncated Neumann-weighted cosine sum  sum_{m=0}^{M} eps_m cos(m theta).
 *
 * Evaluated in closed form sin((M+1/2)theta)/sin(theta/2); at multiples of
 * 2 pi the limit 2M+1 is returned.
 */
inline double dirichlet_sum(int order, double theta)
{
    double const half = std::sin(theta / 2);
    if (std::abs(half) < 1e-7)
    {
        // Near the removable singularity the direct sum is exact enough.
        double sum = 1;
        for (int m = 1; m <= order; ++m)
        {
            sum += 2 * std::cos(m * theta);
        }
        return sum;
    }
    return std::sin((order + 0.5) * theta) / half;
}

}  // namespace qorder::specfun
