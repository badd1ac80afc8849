#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace qorder::specfun
{

using ComplexValue = std::complex<double>;

namespace detail
{

inline constexpr int weideman_order = 40;
inline constexpr double continued_fraction_radius = 8.0;
inline constexpr int continued_fraction_depth = 60;

struct WeidemanTable
{
    std::array<double, weideman_order> coeff{};  // a_1 .. a_N
    double scale = 0;                            // L
};

/*!
 * Coefficients of Weideman's rational expansion of w(z) in (L+iz)/(L-iz).
 *
 * a_j = (1/2M) sum_k f(k) cos(pi j k / M), f(k) = exp(-t^2)(L^2 + t^2),
 * t = L tan(k pi / 2M), M = 2N.
 */
inline WeidemanTable const& weideman_table()
{
    static WeidemanTable const table = [] {
        WeidemanTable t;
        constexpr int n = weideman_order;
        constexpr int m = 2 * n;
        t.scale = std::sqrt(n / std::numbers::sqrt2);
        double const l2 = t.scale * t.scale;
        for (int j = 1; j <= n; ++j)
        {
            double acc = 0;
            for (int k = -m + 1; k < m; ++k)
            {
                double const tt
                    = t.scale * std::tan(k * std::numbers::pi / (2.0 * m));
                double const f = std::exp(-tt * tt) * (l2 + tt * tt);
                acc += f * std::cos(std::numbers::pi * j * k / m);
            }
            t.coeff[static_cast<std::size_t>(j - 1)] = acc / (2.0 * m);
        }
        return t;
    }();
    return table;
}

//! w(z) for Im z >= 0, |z| < 8.
inline ComplexValue faddeeva_rational(ComplexValue z)
{
    auto const& t = weideman_table();
    ComplexValue const iz{-z.imag(), z.real()};
    ComplexValue const denom = t.scale - iz;
    ComplexValue const ratio = (t.scale + iz) / denom;
    ComplexValue p = 0;
    for (int j = weideman_order - 1; j >= 0; --j)
    {
        p = p * ratio + t.coeff[static_cast<std::size_t>(j)];
    }
    return 2.0 * p / (denom * denom)
           + 1.0 / (std::sqrt(std::numbers::pi) * denom);
}

//! w(z) for Im z >= 0, |z| >= 8 by the Laplace continued fraction.
inline ComplexValue faddeeva_continued_fraction(ComplexValue z)
{
    ComplexValue r = 0;
    for (int j = continued_fraction_depth; j > 0; --j)
    {
        r = (0.5 * j) / (z - r);
    }
    return ComplexValue{0, 1 / std::sqrt(std::numbers::pi)} / (z - r);
}

inline ComplexValue erf_taylor(ComplexValue z)
{
    ComplexValue const z2 = z * z;
    ComplexValue term = z;
    ComplexValue sum = z;
    for (int n = 1; n < 40; ++n)
    {
        term *= -z2 / static_cast<double>(n);
        ComplexValue const add = term / (2.0 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum))
        {
            break;
        }
    }
    return (2 / std::sqrt(std::numbers::pi)) * sum;
}

}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Scaled complementary error function w(z) = exp(-z^2) erfc(-iz).
 */
inline ComplexValue faddeeva_w(ComplexValue z)
{
    if (z.imag() < 0)
    {
        return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
    }
    if (std::abs(z) >= detail::continued_fraction_radius)
    {
        return detail::faddeeva_continued_fraction(z);
    }
    return detail::faddeeva_rational(z);
}

//! Complex error function.
inline ComplexValue erf(ComplexValue z)
{
    if (z.real() < 0)
    {
        return -erf(-z);
    }
    if (std::abs(z) < 0.5)
    {
        return detail::erf_taylor(z);
    }
    // Re z >= 0 puts iz in the closed upper half plane.
    return 1.0 - std::exp(-z * z) * faddeeva_w(ComplexValue{-z.imag(), z.real()});
}

//---------------------------------------------------------------------------//
/*!
 * Odd Fresnel-type integral used by the knife-edge solution.
 *
 * Phi(z) = erf(e^{-i pi/4} z) = (2/sqrt(pi)) e^{-i pi/4} int_0^z e^{i mu^2} dmu,
 * so Phi(0) = 0, Phi(-z) = -Phi(z) and Phi -> 1 along the positive real
 * axis. Throws std::overflow_error when the result is not representable.
 */
inline ComplexValue diffraction_integral(ComplexValue z)
{
    if (!(std::abs(z) <= 1e4))
    {
        throw std::domain_error("diffraction_integral: |z| must be <= 1e4");
    }
    ComplexValue const rot{std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2};
    ComplexValue const result = erf(rot * z);
    if (!std::isfinite(result.real()) || !std::isfinite(result.imag()))
    {
        throw std::overflow_error("diffraction_integral: result overflows");
    }
    return result;
}

}  // namespace qorder::specfun
