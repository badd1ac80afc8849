#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "qorder/disk.hpp"
#include "qorder/experiments/table.hpp"
#include "qorder/parallel.hpp"

namespace qorder::experiments
{

/*!
 * Far-field model for locating a hard disk with a focused beam.
 *
 * The beam is a superposition of plane waves with directions alpha weighted
 * by g(alpha) = exp(-alpha^2 / (2 spread^2)) around +x. Shifting the disk by
 * d along y multiplies each scattered component by
 * exp(i k d (sin alpha - sin theta)). Per unit far-field factor the outgoing
 * amplitude in direction theta is
 *   A(theta) = pi g(theta) + int g(alpha) S(theta - alpha) e^{i k d (...)} d alpha
 * with S = sum eps_m t_m cos(m theta).
 */
struct MicroscopeSettings
{
    double angular_spread = 0.3;  //!< radians
    std::size_t angles = 2048;
};

namespace detail
{
inline std::vector<double> angular_distribution(disk::PartialWaveSum const& pw,
                                                double offset, MicroscopeSettings const& s)
{
    using Gauss = boost::math::quadrature::gauss<double, 201>;
    double const half = 6 * s.angular_spread;
    auto const& coeff = pw.weighted_coefficients();
    double const k = pw.k();
    auto beam = [&](double alpha) {
        return std::exp(-alpha * alpha / (2 * s.angular_spread * s.angular_spread));
    };
    auto series = [&](double phi) {
        std::complex<double> sum = 0;
        for (std::size_t m = 0; m < coeff.size(); ++m)
        {
            sum += coeff[m] * std::cos(static_cast<double>(m) * phi);
        }
        return sum;
    };
    std::vector<double> p(s.angles);
    double total = 0;
    for (std::size_t n = 0; n < s.angles; ++n)
    {
        double const theta
            = -std::numbers::pi + 2 * std::numbers::pi * static_cast<double>(n)
                                      / static_cast<double>(s.angles);
        auto integrand = [&](double alpha) {
            return beam(alpha) * series(theta - alpha)
                   * std::polar(1.0, k * offset * (std::sin(alpha) - std::sin(theta)));
        };
        std::complex<double> const scattered = Gauss::integrate(integrand, -half, half);
        std::complex<double> const amp = std::numbers::pi * beam(theta) + scattered;
        p[n] = std::norm(amp);
        total += p[n];
    }
    for (auto& v : p)
    {
        v /= total;
    }
    return p;
}
}  // namespace detail

/*!
 * Total-variation distance between the angular intensity distributions
 * for the disk at the origin and the disk displaced by delta_r.
 */
inline double microscope_distinguishability(double delta_r, double k, double a,
                                            MicroscopeSettings const& s = {})
{
    if (!(delta_r >= 0) || !(k > 0) || !(a > 0) || !(s.angular_spread > 0) || s.angles < 16)
    {
        throw std::invalid_argument(
            "microscope_distinguishability: need delta_r >= 0, k > 0, a > 0");
    }
    disk::PartialWaveSum const pw(k, a);
    auto const centered = detail::angular_distribution(pw, 0.0, s);
    auto const shifted = detail::angular_distribution(pw, delta_r, s);
    double tv = 0;
    for (std::size_t n = 0; n < centered.size(); ++n)
    {
        tv += std::abs(centered[n] - shifted[n]);
    }
    return 0.5 * tv;
}

//! Distinguishability for each offset, given in wavelengths 2 pi / k.
inline Table microscope_sweep(std::vector<double> const& offsets_in_wavelengths, double k,
                              double a, MicroscopeSettings const& s = {}, unsigned workers = 1)
{
    Table t;
    t.experiment = "microscope";
    t.parameter = "delta_r_over_lambda";
    t.columns = {"delta_r", "k", "a", "distinguishability"};
    t.rows.resize(offsets_in_wavelengths.size());
    double const wavelength = 2 * std::numbers::pi / k;
    parallel_for(t.rows.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
        {
            double const d = offsets_in_wavelengths[i] * wavelength;
            t.rows[i].value = offsets_in_wavelengths[i];
            t.rows[i].values = {d, k, a, microscope_distinguishability(d, k, a, s)};
        }
    });
    return t;
}

}  // namespace qorder::experiments
