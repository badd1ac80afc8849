#pragma once

// Independent numerical oracles for tests. Nothing here calls into the
// library's special-function code.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qorder::test
{
using std::numbers::pi;


//! Direct power series in long double.
inline long double series_j(int m, long double x)
{
    long double term = 1;
    for (int i = 1; i <= m; ++i)
    {
        term *= x / 2 / i;
    }
    long double sum = term;
    for (int k = 1; k < 200; ++k)
    {
        term *= -(x / 2) * (x / 2) / (static_cast<long double>(k) * (m + k));
        sum += term;
    }
    return sum;
}

//! Bessel's integral J_m(x) = (1/pi) int_0^pi cos(m t - x sin t) dt.
inline double integral_j(int m, double x)
{
    auto f = [=](double t) { return std::cos(m * t - x * std::sin(t)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
               f, 0.0, pi, 12, 1e-14)
           / pi;
}

//! Y_m(x) = (1/pi) int_0^pi sin(x sin t - m t) dt
//!        - (1/pi) int_0^inf (e^{mt} + (-1)^m e^{-mt}) e^{-x sinh t} dt.
inline double integral_y(int m, double x)
{
    auto f = [=](double t) { return std::sin(x * std::sin(t) - m * t); };
    double const a = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, pi, 12, 1e-14);
    double const sign = (m % 2) ? -1.0 : 1.0;
    auto g = [=](double t) {
        double const decay = x * std::sinh(t);
        return std::exp(m * t - decay) + sign * std::exp(-m * t - decay);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    double const b = integrator.integrate(g, 0.0,
                                          std::numeric_limits<double>::infinity());
    return (a - b) / pi;
}

//! Phi(u) for real u via the decaying contour tail:
//! int_0^u e^{i mu^2} = (sqrt(pi)/2) e^{i pi/4} - int_0^inf e^{i(u + e^{i pi/4}s)^2} e^{i pi/4} ds.
inline std::complex<double> oracle_phi_real(double u)
{
    using C = std::complex<double>;
    C const rot = std::polar(1.0, pi / 4);
    auto re = [&](double s) {
        C const w = u + rot * s;
        return (std::exp(C{0, 1} * w * w) * rot).real();
    };
    auto im = [&](double s) {
        C const w = u + rot * s;
        return (std::exp(C{0, 1} * w * w) * rot).imag();
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    double const inf = std::numeric_limits<double>::infinity();
    C const tail{integrator.integrate(re, 0.0, inf),
                 integrator.integrate(im, 0.0, inf)};
    C const fresnel = std::sqrt(pi) / 2 * rot - tail;
    return 2 / std::sqrt(pi) * std::conj(rot) * fresnel;
}

//! erf(z) = (2/sqrt(pi)) int_0^1 z exp(-(zt)^2) dt along the straight path.
inline std::complex<double> oracle_erf(std::complex<double> z)
{
    using C = std::complex<double>;
    auto re = [&](double t) { return (z * std::exp(-(z * t) * (z * t))).real(); };
    auto im = [&](double t) { return (z * std::exp(-(z * t) * (z * t))).imag(); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    return 2 / std::sqrt(pi)
           * C{GK::integrate(re, 0.0, 1.0, 12, 1e-15),
               GK::integrate(im, 0.0, 1.0, 12, 1e-15)};
}

inline double relative_error(double value, double expected)
{
    return std::abs(value - expected) / std::max(std::abs(expected), 1e-300);
}

/*!
 * Continuous-branch hard-disk phase shift from the integral oracles,
 * unwrapped on a uniform ka grid of at most `step`.
 */
inline double oracle_phase_shift(int m, double ka, double step = 0.2)
{
    int const n = static_cast<int>(std::ceil(ka / step));
    double delta = 0;
    for (int i = 1; i <= n; ++i)
    {
        double const x = ka * i / n;
        double const p = std::atan(-integral_j(m, x) / integral_y(m, x));
        delta = p + pi * std::round((delta - p) / pi);
    }
    return delta;
}

}  // namespace qorder::test
