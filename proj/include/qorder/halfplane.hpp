#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qorder/errors.hpp"
#include "qorder/quadrature.hpp"
#include "qorder/specfun/faddeeva.hpp"

namespace qorder::halfplane
{

using specfun::ComplexValue;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2 * std::numbers::pi;

//---------------------------------------------------------------------------//
/*!
 * Plane wave of wavenumber k arriving from quadrant I at angle theta0 to the
 * x-axis, diffracted by a hard screen on the negative y-axis.
 */
struct HalfPlaneConfig
{
    double k = 1;
    double theta0 = pi / 4;

    void validate() const
    {
        if (!(k > 0) || !std::isfinite(k))
        {
            throw std::invalid_argument("HalfPlaneConfig: k must be positive");
        }
        if (!(theta0 > 0 && theta0 < pi / 2))
        {
            throw std::invalid_argument(
                "HalfPlaneConfig: theta0 must lie strictly inside (0, pi/2)");
        }
    }
};

enum class RegionTag
{
    illuminated,
    reflection,
    shadow
};

enum class Quadrant
{
    I,
    II,
    III,
    IV
};

struct RegionLabel
{
    RegionTag tag;
    Quadrant quadrant;

    friend bool operator==(RegionLabel const&, RegionLabel const&) = default;
};

struct FailureResult
{
    double sigma_f = 0;                  //!< regularized integral of |f|^2
    double excluded_cone_halfwidth = 0;  //!< radians
    double closed_form = 0;              //!< 1/(k cos(theta0/2))
};

//! Default cone excluded around each shadow boundary in the sigma_f integral.
inline constexpr double default_failure_cone = 0.1;

//---------------------------------------------------------------------------//
// ANGLES
//---------------------------------------------------------------------------//
//! Map any angle to [0, 2pi).
inline double wrap_angle(double theta)
{
    double t = std::fmod(theta, two_pi);
    if (t < 0)
    {
        t += two_pi;
    }
    return t >= two_pi ? 0.0 : t;
}

//! Map to [-pi/2, 3pi/2), the sheet on which both screen faces sit at the ends.
inline double screen_angle(double theta)
{
    double const t = wrap_angle(theta);
    return t >= 1.5 * pi ? t - two_pi : t;
}

inline Quadrant quadrant_of(double theta)
{
    double const t = wrap_angle(theta);
    if (t < pi / 2)
        return Quadrant::I;
    if (t < pi)
        return Quadrant::II;
    if (t < 1.5 * pi)
        return Quadrant::III;
    return Quadrant::IV;
}

//! Shadow-boundary (pole) angles in [0, 2pi): reflection edge, then shadow edge.
inline std::array<double, 2> shadow_boundaries(HalfPlaneConfig const& cfg)
{
    return {two_pi - cfg.theta0, pi + cfg.theta0};
}

inline RegionLabel classify_region(double theta, HalfPlaneConfig const& cfg)
{
    cfg.validate();
    double const t = screen_angle(theta);
    RegionTag tag = RegionTag::illuminated;
    if (t < -cfg.theta0)
    {
        tag = RegionTag::reflection;
    }
    else if (t > pi + cfg.theta0)
    {
        tag = RegionTag::shadow;
    }
    return {tag, quadrant_of(theta)};
}

//! Width of the Fresnel transition zone excluded from field comparisons.
inline double boundary_cone_halfwidth(double kr)
{
    return std::max(0.05, 3 / std::sqrt(kr));
}

//! Distance from theta to the nearest shadow boundary, modulo 2pi.
inline double boundary_distance(double theta, HalfPlaneConfig const& cfg)
{
    double best = pi;
    for (double b : shadow_boundaries(cfg))
    {
        double d = std::abs(wrap_angle(theta) - b);
        best = std::min(best, std::min(d, two_pi - d));
    }
    return best;
}

//---------------------------------------------------------------------------//
// FIELDS
//---------------------------------------------------------------------------//
/*!
 * Exact knife-edge field at polar position (r, theta).
 *
 *   psi = 1/2 e^{-ikr cos(t-t0)} [1 + Phi(sqrt(2kr) cos((t-t0)/2))]
 *       - 1/2 e^{ ikr cos(t+t0)} [1 + Phi(-sqrt(2kr) sin((t+t0)/2))]
 *
 * with the angle taken on [-pi/2, 3pi/2) so the screen is both ends of the
 * range and psi vanishes there.
 */
inline ComplexValue exact_field(double r, double theta, HalfPlaneConfig const& cfg)
{
    cfg.validate();
    if (!(r > 0))
    {
        throw std::domain_error("exact_field: r must be positive");
    }
    double const t = screen_angle(theta);
    double const kr = cfg.k * r;
    double const root = std::sqrt(2 * kr);
    ComplexValue const incident
        = std::polar(1.0, -kr * std::cos(t - cfg.theta0));
    ComplexValue const image = std::polar(1.0, kr * std::cos(t + cfg.theta0));
    ComplexValue const a
        = 1.0 + specfun::diffraction_integral(root * std::cos((t - cfg.theta0) / 2));
    ComplexValue const b
        = 1.0 + specfun::diffraction_integral(-root * std::sin((t + cfg.theta0) / 2));
    return 0.5 * (incident * a - image * b);
}

/*!
 * Diffraction amplitude f(theta) of the outgoing e^{ikr}/sqrt(r) wave.
 *
 * Throws pole_error on the shadow boundaries theta = -theta0, pi + theta0.
 */
inline ComplexValue scattering_amplitude(double theta, HalfPlaneConfig const& cfg)
{
    cfg.validate();
    double const t = screen_angle(theta);
    double const s = std::sin((t + cfg.theta0) / 2);
    double const c = std::cos((t - cfg.theta0) / 2);
    constexpr double degenerate = 1e-12;
    if (std::abs(s) < degenerate || std::abs(c) < degenerate)
    {
        throw pole_error("scattering_amplitude: angle is on a shadow boundary");
    }
    // -sqrt(i/(8 pi k)) = -e^{i pi/4}/sqrt(8 pi k)
    ComplexValue const prefactor
        = -std::polar(1 / std::sqrt(8 * pi * cfg.k), pi / 4);
    return prefactor * (1 / s + 1 / c);
}

//! |f(theta)|^2 without the pole check (for quadrature).
inline double amplitude_squared(double theta, HalfPlaneConfig const& cfg)
{
    double const t = screen_angle(theta);
    double const sum = 1 / std::sin((t + cfg.theta0) / 2)
                       + 1 / std::cos((t - cfg.theta0) / 2);
    return sum * sum / (8 * pi * cfg.k);
}

struct AsymptoticField
{
    ComplexValue geometric;   //!< incident (+ reflected) plane-wave part
    ComplexValue diffracted;  //!< f(theta) e^{ikr}/sqrt(r)
    RegionLabel region;

    [[nodiscard]] ComplexValue value() const { return geometric + diffracted; }
};

/*!
 * Three-branch far-field form of the knife-edge solution.
 *
 * Requires kr >= 100; throws boundary_zone_error within
 * boundary_cone_halfwidth(kr) of a shadow boundary.
 */
inline AsymptoticField
asymptotic_field(double r, double theta, HalfPlaneConfig const& cfg)
{
    cfg.validate();
    double const kr = cfg.k * r;
    if (!(kr >= 100))
    {
        throw std::domain_error("asymptotic_field: requires kr >= 100");
    }
    if (boundary_distance(theta, cfg) < boundary_cone_halfwidth(kr))
    {
        throw boundary_zone_error(
            "asymptotic_field: angle lies in a shadow-boundary transition zone");
    }
    double const t = screen_angle(theta);
    AsymptoticField out{};
    out.region = classify_region(theta, cfg);
    ComplexValue const incident
        = std::polar(1.0, -kr * std::cos(t - cfg.theta0));
    ComplexValue const reflected
        = std::polar(1.0, kr * std::cos(t + cfg.theta0));
    switch (out.region.tag)
    {
        case RegionTag::illuminated: out.geometric = incident; break;
        case RegionTag::reflection:
            out.geometric = incident - reflected;
            break;
        case RegionTag::shadow: out.geometric = 0; break;
    }
    out.diffracted = scattering_amplitude(theta, cfg) * std::polar(1.0, kr)
                     / std::sqrt(r);
    return out;
}

//---------------------------------------------------------------------------//
// CROSS SECTIONS
//---------------------------------------------------------------------------//
namespace detail
{
//! [0, 2pi) minus the cones of `halfwidth` around both shadow boundaries.
inline std::vector<std::pair<double, double>>
allowed_intervals(HalfPlaneConfig const& cfg, double halfwidth)
{
    std::vector<std::pair<double, double>> cuts;
    for (double b : shadow_boundaries(cfg))
    {
        double lo = b - halfwidth;
        double hi = b + halfwidth;
        if (lo < 0)
        {
            cuts.emplace_back(0, hi);
            cuts.emplace_back(lo + two_pi, two_pi);
        }
        else if (hi > two_pi)
        {
            cuts.emplace_back(lo, two_pi);
            cuts.emplace_back(0, hi - two_pi);
        }
        else
        {
            cuts.emplace_back(lo, hi);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<double, double>> allowed;
    double cursor = 0;
    for (auto [lo, hi] : cuts)
    {
        if (lo > cursor)
        {
            allowed.emplace_back(cursor, lo);
        }
        cursor = std::max(cursor, hi);
    }
    if (cursor < two_pi)
    {
        allowed.emplace_back(cursor, two_pi);
    }
    return allowed;
}
}  // namespace detail

//! Closed form 1/(k cos(theta0/2)); defined on the closed range [0, pi/2).
inline double failure_closed_form(double k, double theta0)
{
    if (!(k > 0) || !(theta0 >= 0 && theta0 < pi / 2))
    {
        throw std::invalid_argument("failure_closed_form: need k > 0, 0 <= theta0 < pi/2");
    }
    return 1 / (k * std::cos(theta0 / 2));
}

/*!
 * Failure cross section: integral of |f|^2 over all angles outside cones
 * around the two shadow boundaries, reported next to 1/(k cos(theta0/2)).
 *
 * The unregularized integral diverges (double poles), so the two numbers
 * share the 1/k scaling but not the constant.
 */
inline FailureResult
failure_cross_section(HalfPlaneConfig const& cfg,
                      double cone_halfwidth = default_failure_cone)
{
    cfg.validate();
    if (!(cone_halfwidth > 0 && cone_halfwidth < 0.3))
    {
        throw std::invalid_argument(
            "failure_cross_section: cone half-width must lie in (0, 0.3)");
    }
    FailureResult result;
    result.excluded_cone_halfwidth = cone_halfwidth;
    result.closed_form = failure_closed_form(cfg.k, cfg.theta0);
    for (auto [lo, hi] : detail::allowed_intervals(cfg, cone_halfwidth))
    {
        result.sigma_f += integrate(
            [&cfg](double t) { return amplitude_squared(t, cfg); }, lo, hi, 1e-8);
    }
    return result;
}

/*!
 * Integral of |f|^2 over the classically forbidden quadrants I and II.
 *
 * Both poles lie outside (0, pi), so this is finite without regularization.
 */
inline double forbidden_quadrant_cross_section(HalfPlaneConfig const& cfg)
{
    cfg.validate();
    return integrate(
        [&cfg](double t) { return amplitude_squared(t, cfg); }, 0.0, pi, 1e-10);
}

//! Separation below which the ordering measurement fails: 2/k.
inline double min_resolvable_separation(HalfPlaneConfig const& cfg)
{
    cfg.validate();
    return 2 / cfg.k;
}

}  // namespace qorder::halfplane
