#pragma once

#include <cmath>
#include <stdexcept>

namespace qorder
{

/*!
 * Absolute/relative tolerance pair used for special-function checks.
 *
 * Both tolerances must lie in (0, 1e-2).
 */
struct EvalAccuracy
{
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;

    constexpr EvalAccuracy() = default;
    EvalAccuracy(double abs, double rel) : abs_tol(abs), rel_tol(rel)
    {
        if (!(abs > 0 && abs < 1e-2) || !(rel > 0 && rel < 1e-2))
        {
            throw std::invalid_argument(
                "EvalAccuracy tolerances must lie in (0, 1e-2)");
        }
    }

    //! True if `value` matches `expected` within either tolerance.
    [[nodiscard]] bool accepts(double value, double expected) const
    {
        double diff = std::abs(value - expected);
        return diff <= abs_tol || diff <= rel_tol * std::abs(expected);
    }
};

}  // namespace qorder
