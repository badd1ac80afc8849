#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qorder/errors.hpp"
#include "qorder/specfun/bessel.hpp"

namespace qorder::disk
{

inline constexpr double pi = std::numbers::pi;

/*!
 * Phase shift of partial wave m off a hard disk, tan(delta) = -J_m(ka)/N_m(ka),
 * on the continuous branch with delta(0+) = 0.
 */
struct PhaseShift
{
    int m = 0;
    double ka = 0;
    double delta = 0;
};

//! Largest ka step taken while unwrapping a branch; |d delta/d ka| <= ~1.
inline constexpr double branch_step = 0.25;

namespace detail
{
//! Principal value in (-pi/2, pi/2) of atan(-J/N).
inline double principal_shift(double j, double n)
{
    if (j == 0)
    {
        return 0;
    }
    return std::atan(-j / n);
}

//! Pick the representative of `principal` + n pi closest to `previous`.
inline double unwrap(double principal, double previous)
{
    return principal + pi * std::round((previous - principal) / pi);
}

//! Sweep points used to build a branch out to ka.
inline std::vector<double> branch_grid(double ka)
{
    auto const steps = static_cast<std::size_t>(std::ceil(ka / branch_step));
    std::vector<double> grid;
    grid.reserve(steps);
    for (std::size_t i = 1; i <= steps; ++i)
    {
        grid.push_back(ka * static_cast<double>(i) / static_cast<double>(steps));
    }
    return grid;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Phase shifts for m = 0..m_max at a single ka, each on its continuous branch.
 *
 * The branches are built together by marching in ka from 0 with steps no
 * larger than branch_step, so successive values never jump by pi/2 or more.
 */
inline std::vector<PhaseShift> phase_shifts(int m_max, double ka)
{
    if (!(ka >= 0) || !std::isfinite(ka))
    {
        throw std::domain_error("phase_shifts: ka must be nonnegative");
    }
    std::vector<PhaseShift> out(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m)
    {
        out[static_cast<std::size_t>(m)] = {m, ka, 0.0};
    }
    if (ka == 0)
    {
        return out;
    }
    for (double x : detail::branch_grid(ka))
    {
        auto const j = specfun::bessel_j_sequence(m_max, x);
        auto const n = specfun::bessel_y_sequence(m_max, x);
        for (std::size_t m = 0; m < out.size(); ++m)
        {
            out[m].delta = detail::unwrap(detail::principal_shift(j[m], n[m]),
                                          out[m].delta);
        }
    }
    return out;
}

inline PhaseShift phase_shift(int m, double ka)
{
    if (m < 0)
    {
        throw std::domain_error("phase_shift: m must be nonnegative");
    }
    if (!(ka >= 0) || !std::isfinite(ka))
    {
        throw std::domain_error("phase_shift: ka must be nonnegative");
    }
    PhaseShift out{m, ka, 0.0};
    if (ka == 0)
    {
        return out;
    }
    for (double x : detail::branch_grid(ka))
    {
        out.delta = detail::unwrap(
            detail::principal_shift(specfun::bessel_j(m, x),
                                    specfun::bessel_y(m, x)),
            out.delta);
    }
    return out;
}

//---------------------------------------------------------------------------//
// REGIME FORMS
//---------------------------------------------------------------------------//
/*!
 * Small-ka closed forms: tan(delta_0) ~ -pi/(2 ln ka) and
 * delta_m ~ pi m/(m!)^2 (ka/2)^{2m}. Valid for ka < 0.1.
 */
inline double small_ka_shift(int m, double ka)
{
    if (m < 0 || !(ka > 0 && ka < 0.1))
    {
        throw regime_error("small_ka_shift: requires m >= 0 and 0 < ka < 0.1");
    }
    if (m == 0)
    {
        return std::atan(-pi / (2 * std::log(ka)));
    }
    double const log_value = std::log(pi * m) - 2 * std::lgamma(m + 1.0)
                             + 2 * m * std::log(ka / 2);
    return std::exp(log_value);
}

/*!
 * Large-ka closed form ka - (pi/2)(m + 1/2) as commonly quoted.
 *
 * Note that with tan(delta) = -J/N the continuous branch approaches
 * ka - (pi/2)(m - 1/2) instead: this form is offset by exactly pi/2.
 * Valid for ka > 5m + 10.
 */
inline double large_ka_shift(int m, double ka)
{
    if (m < 0 || !(ka > 5.0 * m + 10))
    {
        throw regime_error("large_ka_shift: requires ka > 5m + 10");
    }
    return ka - (pi / 2) * (m + 0.5);
}

//! Distance of `a - b` from the nearest multiple of pi.
inline double distance_mod_pi(double a, double b)
{
    double d = std::fmod(std::abs(a - b), pi);
    return std::min(d, pi - d);
}

//! delta_1 / delta_0 on the continuous branches.
inline double shift_ratio(double ka)
{
    if (!(ka > 0))
    {
        throw std::domain_error("shift_ratio: ka must be positive");
    }
    auto const shifts = phase_shifts(1, ka);
    return shifts[1].delta / shifts[0].delta;
}

//---------------------------------------------------------------------------//
// PARTIAL-WAVE SUMS
//---------------------------------------------------------------------------//
//! Truncation order ceil(ka + 8 (ka)^{1/3} + 10).
inline int truncation_order(double ka)
{
    return static_cast<int>(std::ceil(ka + 8 * std::cbrt(ka) + 10));
}

/*!
 * Immutable set of phase shifts for a disk of radius a at wavenumber k.
 */
class PartialWaveSum
{
  public:
    PartialWaveSum(double k, double a) : k_(k), a_(a)
    {
        if (!(k > 0) || !(a > 0))
        {
            throw std::invalid_argument("PartialWaveSum: k and a must be positive");
        }
        m_max_ = truncation_order(k * a);
        shifts_ = phase_shifts(m_max_, k * a);
        coeff_.reserve(shifts_.size());
        double total = 0;
        for (auto const& s : shifts_)
        {
            double const eps = s.m == 0 ? 1.0 : 2.0;
            // t_m = (e^{-2i delta} - 1)/2
            coeff_.push_back(eps * 0.5 * (std::polar(1.0, -2 * s.delta) - 1.0));
            total += eps * std::pow(std::sin(s.delta), 2);
        }
        double const last = 2 * std::pow(std::sin(shifts_.back().delta), 2);
        truncation_warning_ = total > 0 && last > 1e-8 * total;
    }

    double k() const { return k_; }
    double a() const { return a_; }
    double ka() const { return k_ * a_; }
    int m_max() const { return m_max_; }
    std::vector<PhaseShift> const& shifts() const { return shifts_; }
    //! eps_m t_m for m = 0..m_max.
    std::vector<std::complex<double>> const& weighted_coefficients() const
    {
        return coeff_;
    }
    //! Last retained partial wave carries more than 1e-8 of the total.
    bool truncation_warning() const { return truncation_warning_; }

    /*!
     * Far-field amplitude for a wave travelling along +x:
     * f = sqrt(2/(pi k)) e^{-i pi/4} sum eps_m t_m cos(m theta).
     */
    std::complex<double> amplitude(double theta) const
    {
        std::complex<double> sum = 0;
        for (std::size_t m = 0; m < coeff_.size(); ++m)
        {
            sum += coeff_[m] * std::cos(static_cast<double>(m) * theta);
        }
        return std::sqrt(2 / (pi * k_)) * std::polar(1.0, -pi / 4) * sum;
    }

  private:
    double k_;
    double a_;
    int m_max_ = 0;
    std::vector<PhaseShift> shifts_;
    std::vector<std::complex<double>> coeff_;
    bool truncation_warning_ = false;
};

//! sigma(theta) = |f(theta)|^2 (length per radian).
inline double differential_cross_section(double theta, PartialWaveSum const& pw)
{
    return std::norm(pw.amplitude(theta));
}

struct CrossSectionProfile
{
    std::vector<double> angles;
    std::vector<double> values;
    double total = 0;
};

//! sigma(theta) sampled on n uniform angles in [0, 2pi); total by trapezoid.
inline CrossSectionProfile cross_section_profile(PartialWaveSum const& pw,
                                                 std::size_t n = 720)
{
    CrossSectionProfile p;
    p.angles.resize(n);
    p.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        p.angles[i] = 2 * pi * static_cast<double>(i) / static_cast<double>(n);
        p.values[i] = differential_cross_section(p.angles[i], pw);
        p.total += p.values[i];
    }
    // Periodic trapezoid is exact for trigonometric polynomials of degree < n.
    p.total *= 2 * pi / static_cast<double>(n);
    return p;
}

//! (4/k) sum eps_m sin^2 delta_m.
inline double total_cross_section(PartialWaveSum const& pw)
{
    double total = 0;
    for (auto const& s : pw.shifts())
    {
        total += (s.m == 0 ? 1.0 : 2.0) * std::pow(std::sin(s.delta), 2);
    }
    return 4 / pw.k() * total;
}

struct HemisphereFlux
{
    double forward = 0;   //!< |theta| < pi/2
    double backward = 0;  //!< |theta| > pi/2
};

/*!
 * Fraction of scattered flux in each hemisphere, from exact integrals of
 * cos(m theta) cos(n theta) over the backward half.
 */
inline HemisphereFlux hemisphere_fractions(PartialWaveSum const& pw)
{
    auto const& c = pw.weighted_coefficients();
    auto cos_integral = [](long j) {
        // integral of cos(j theta) over [pi/2, 3pi/2]
        if (j == 0)
        {
            return pi;
        }
        double const jd = static_cast<double>(j);
        return (std::sin(1.5 * pi * jd) - std::sin(0.5 * pi * jd)) / jd;
    };
    double back = 0;
    double total = 0;
    for (std::size_t m = 0; m < c.size(); ++m)
    {
        for (std::size_t n = 0; n < c.size(); ++n)
        {
            double const re = (c[m] * std::conj(c[n])).real();
            long const mi = static_cast<long>(m);
            long const ni = static_cast<long>(n);
            back += re * 0.5
                    * (cos_integral(mi - ni) + cos_integral(mi + ni));
            if (m == n)
            {
                total += re * (m == 0 ? 2 * pi : pi);
            }
        }
    }
    HemisphereFlux out;
    out.backward = back / total;
    out.forward = 1 - out.backward;
    return out;
}

/*!
 * Backward-hemisphere share of the scattered flux: 1/2 for the isotropic
 * s-wave, dropping toward ~0.35 once the forward diffraction peak forms.
 */
inline double shadow_sharpness(PartialWaveSum const& pw)
{
    return hemisphere_fractions(pw).backward;
}

}  // namespace qorder::disk
