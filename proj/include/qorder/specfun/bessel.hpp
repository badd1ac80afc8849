#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qorder::specfun
{

inline constexpr int max_bessel_order = 2000;
inline constexpr double max_bessel_argument = 1e6;

namespace detail
{

inline constexpr double euler_gamma = 0.57721566490153286061;

// Above this the Hankel asymptotic series seeds orders 0 and 1 to full
// double precision (smallest term ~ exp(-2x)).
inline constexpr double asymptotic_threshold = 25.0;

inline void check_order_and_argument(int m, double x, char const* who)
{
    if (m < 0 || m > max_bessel_order)
    {
        throw std::domain_error(std::string(who) + ": order "
                                + std::to_string(m) + " outside [0, "
                                + std::to_string(max_bessel_order) + "]");
    }
    if (!(x >= 0) || x > max_bessel_argument)
    {
        throw std::domain_error(std::string(who) + ": argument "
                                + std::to_string(x) + " outside [0, 1e6]");
    }
}

struct HankelPQ
{
    double p = 1;
    double q = 0;
};

//! Hankel's asymptotic P and Q series for integer order at large x.
inline HankelPQ hankel_pq(int nu, double x)
{
    double const mu = 4.0 * nu * nu;
    HankelPQ r;
    double term = 1;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 400; ++k)
    {
        double const odd = 2.0 * k - 1;
        term *= (mu - odd * odd) / (8.0 * k * x);
        double const mag = std::abs(term);
        if (mag > last)
        {
            break;  // series started diverging
        }
        switch (k % 4)
        {
            case 1: r.q += term; break;
            case 2: r.p -= term; break;
            case 3: r.q -= term; break;
            default: r.p += term; break;
        }
        if (mag < 1e-18)
        {
            break;
        }
        last = mag;
    }
    return r;
}

struct SeedPair
{
    double j0, j1, y0, y1;
};

//! J0, J1, Y0, Y1 from the large-argument expansion (x >= 25).
inline SeedPair asymptotic_seeds(double x)
{
    double const amp = std::sqrt(2.0 / (std::numbers::pi * x));
    double const c = std::cos(x);
    double const s = std::sin(x);
    double const r2 = std::numbers::sqrt2 / 2;
    // chi_0 = x - pi/4, chi_1 = x - 3 pi/4, expanded to keep the argument
    // reduction exact for large x.
    double const cos0 = r2 * (c + s);
    double const sin0 = r2 * (s - c);
    double const cos1 = r2 * (s - c);
    double const sin1 = -r2 * (s + c);
    auto const pq0 = hankel_pq(0, x);
    auto const pq1 = hankel_pq(1, x);
    return {amp * (pq0.p * cos0 - pq0.q * sin0),
            amp * (pq1.p * cos1 - pq1.q * sin1),
            amp * (pq0.p * sin0 + pq0.q * cos0),
            amp * (pq1.p * sin1 + pq1.q * cos1)};
}

//! Miller start index for backward recurrence reaching `top`.
inline int miller_start(int top)
{
    int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
    return start + (start % 2);
}

/*!
 * Unnormalized backward recurrence from `start` down to `stop`.
 *
 * Returns values u[n - stop] proportional to J_n for n in [stop, start].
 * Rescales on the fly so nothing overflows.
 */
inline std::vector<double> backward_recurrence(double x, int start, int stop)
{
    std::vector<double> u(static_cast<std::size_t>(start - stop + 2), 0.0);
    auto at = [&](int n) -> double& {
        return u[static_cast<std::size_t>(n - stop)];
    };
    at(start) = 1e-30;
    double next = 0;  // u_{start+1}
    for (int n = start; n > stop; --n)
    {
        double const prev = (2.0 * n / x) * at(n) - next;
        next = at(n);
        at(n - 1) = prev;
        if (std::abs(prev) > 1e250)
        {
            for (int i = n - 1; i <= start; ++i)
            {
                at(i) *= 1e-250;
            }
            next *= 1e-250;
        }
    }
    u.pop_back();
    return u;
}

//! J_0..J_nmax for 0 < x <= 25 by Miller's algorithm with sum normalization.
inline std::vector<double> j_sequence_miller(double x, int nmax)
{
    int const start
        = miller_start(std::max(nmax, static_cast<int>(std::ceil(x))));
    auto u = backward_recurrence(x, start, 0);
    // J_0 + 2 sum J_2k = 1
    double sum = u[0];
    for (int n = 2; n <= start; n += 2)
    {
        sum += 2 * u[static_cast<std::size_t>(n)];
    }
    u.resize(static_cast<std::size_t>(nmax) + 1);
    for (auto& v : u)
    {
        v /= sum;
    }
    return u;
}

//! J_0..J_nmax for x > 25: forward recurrence below x, Miller above.
inline std::vector<double> j_sequence_large(double x, int nmax)
{
    auto const seeds = asymptotic_seeds(x);
    std::vector<double> j(static_cast<std::size_t>(nmax) + 1, 0.0);
    j[0] = seeds.j0;
    if (nmax == 0)
    {
        return j;
    }
    j[1] = seeds.j1;
    int const turning = static_cast<int>(std::floor(x));
    int const n0 = std::min(nmax, turning);
    for (int n = 1; n < n0; ++n)
    {
        j[static_cast<std::size_t>(n) + 1]
            = (2.0 * n / x) * j[static_cast<std::size_t>(n)]
              - j[static_cast<std::size_t>(n) - 1];
    }
    if (nmax <= n0)
    {
        return j;
    }
    // Match a backward sweep to the larger of J_{n0-1}, J_{n0}.
    int const stop = n0 - 1;
    auto u = backward_recurrence(x, miller_start(nmax), stop);
    int ref = std::abs(j[static_cast<std::size_t>(n0)])
                      > std::abs(j[static_cast<std::size_t>(stop)])
                  ? n0
                  : stop;
    double const scale = j[static_cast<std::size_t>(ref)]
                         / u[static_cast<std::size_t>(ref - stop)];
    for (int n = n0 + 1; n <= nmax; ++n)
    {
        j[static_cast<std::size_t>(n)]
            = scale * u[static_cast<std::size_t>(n - stop)];
    }
    return j;
}

inline std::vector<double> j_sequence(double x, int nmax)
{
    if (x == 0)
    {
        std::vector<double> j(static_cast<std::size_t>(nmax) + 1, 0.0);
        j[0] = 1;
        return j;
    }
    return x <= asymptotic_threshold ? j_sequence_miller(x, nmax)
                                     : j_sequence_large(x, nmax);
}

//! Ascending series, used where (x/2)^2 < m + 1 so terms shrink monotonically.
inline double j_series(int m, double x)
{
    double const half = x / 2;
    double term
        = std::exp(m * std::log(half) - std::lgamma(static_cast<double>(m) + 1));
    double sum = term;
    double const q = half * half;
    for (int k = 1; k < 500 && term != 0; ++k)
    {
        term *= -q / (static_cast<double>(k) * (m + k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
        {
            break;
        }
    }
    return sum;
}

//! Y0 and Y1 from Neumann series over Miller J values (0 < x <= 25).
inline std::pair<double, double> y01_neumann(double x)
{
    int const len = static_cast<int>(1.5 * x) + 42;
    auto const j = j_sequence_miller(x, len);
    double const lg = std::log(x / 2) + euler_gamma;
    double s0 = 0;
    double s1 = 0;
    for (int k = 1; 2 * k + 1 <= len; ++k)
    {
        double const sign = (k % 2) ? -1.0 : 1.0;
        s0 += sign * j[static_cast<std::size_t>(2 * k)] / k;
        s1 += sign
              * (j[static_cast<std::size_t>(2 * k - 1)]
                 - j[static_cast<std::size_t>(2 * k + 1)])
              / k;
    }
    double const y0 = (2 / std::numbers::pi) * (lg * j[0] - 2 * s0);
    double const y1 = (2 / std::numbers::pi) * (lg * j[1] - j[0] / x + s1);
    return {y0, y1};
}

inline std::vector<double> y_sequence(double x, int nmax)
{
    double y0, y1;
    if (x <= asymptotic_threshold)
    {
        std::tie(y0, y1) = y01_neumann(x);
    }
    else
    {
        auto const s = asymptotic_seeds(x);
        y0 = s.y0;
        y1 = s.y1;
    }
    std::vector<double> y(static_cast<std::size_t>(nmax) + 1);
    y[0] = y0;
    if (nmax >= 1)
    {
        y[1] = y1;
    }
    bool overflowed = false;
    for (int n = 1; n < nmax; ++n)
    {
        auto const i = static_cast<std::size_t>(n);
        if (overflowed)
        {
            y[i + 1] = -std::numeric_limits<double>::infinity();
            continue;
        }
        y[i + 1] = (2.0 * n / x) * y[i] - y[i - 1];
        if (!std::isfinite(y[i + 1]))
        {
            overflowed = true;
            y[i + 1] = -std::numeric_limits<double>::infinity();
        }
    }
    return y;
}

}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Bessel function of the first kind J_m(x).
 *
 * Power series where (x/2)^2 < m+1, Miller backward recurrence for
 * moderate x, and asymptotic seeds plus forward recurrence for x > 25.
 */
inline double bessel_j(int m, double x)
{
    detail::check_order_and_argument(m, x, "bessel_j");
    if (x == 0)
    {
        return m == 0 ? 1.0 : 0.0;
    }
    if ((x / 2) * (x / 2) < m + 1)
    {
        return detail::j_series(m, x);
    }
    return detail::j_sequence(x, m).back();
}

//! J_0(x) .. J_nmax(x).
inline std::vector<double> bessel_j_sequence(int nmax, double x)
{
    detail::check_order_and_argument(nmax, x, "bessel_j_sequence");
    return detail::j_sequence(x, nmax);
}

//---------------------------------------------------------------------------//
/*!
 * Bessel function of the second kind N_m(x) (a.k.a. Y_m).
 *
 * Orders 0 and 1 are seeded by Neumann series (x <= 25) or the Hankel
 * expansion; higher orders follow by forward recurrence, which is stable for
 * the second kind. Overflow saturates to -infinity.
 */
inline double bessel_y(int m, double x)
{
    detail::check_order_and_argument(m, x, "bessel_y");
    if (!(x > 0))
    {
        throw std::domain_error("bessel_y: argument must be positive");
    }
    return detail::y_sequence(x, m)[static_cast<std::size_t>(m)];
}

//! N_0(x) .. N_nmax(x).
inline std::vector<double> bessel_y_sequence(int nmax, double x)
{
    detail::check_order_and_argument(nmax, x, "bessel_y_sequence");
    if (!(x > 0))
    {
        throw std::domain_error("bessel_y_sequence: argument must be positive");
    }
    return detail::y_sequence(x, nmax);
}

//! Outgoing Hankel function H^(1)_m = J_m + i N_m.
inline std::complex<double> hankel1(int m, double x)
{
    return {bessel_j(m, x), bessel_y(m, x)};
}

}  // namespace qorder::specfun
