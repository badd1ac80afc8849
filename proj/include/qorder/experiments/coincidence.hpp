#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qorder/disk.hpp"
#include "qorder/experiments/table.hpp"
#include "qorder/parallel.hpp"

namespace qorder::experiments
{

inline constexpr double coincidence_ratio_threshold = 0.9;
inline constexpr double isotropy_limit = 1.05;

//! max/min of sigma(theta) over 360 angles.
inline double anisotropy(disk::PartialWaveSum const& pw)
{
    auto const profile = disk::cross_section_profile(pw, 360);
    auto [lo, hi] = std::minmax_element(profile.values.begin(), profile.values.end());
    return *hi / *lo;
}

/*!
 * Refine where shift_ratio crosses `threshold` inside [lo, hi] by bisection.
 * Requires ratio(lo) <= threshold < ratio(hi).
 */
inline double refine_crossover(double lo, double hi, double threshold = coincidence_ratio_threshold)
{
    for (int i = 0; i < 60 && hi - lo > 1e-10 * hi; ++i)
    {
        double const mid = 0.5 * (lo + hi);
        (disk::shift_ratio(mid) > threshold ? hi : lo) = mid;
    }
    return hi;
}

/*!
 * Per ka: shift ratio, shadow sharpness, isotropy and regime residuals, plus
 * the coincidence window delta_t_c = a M / k against E_bar = k^2/(2M).
 *
 * Summary keys: ka_star (first crossing of the 0.9 ratio, refined by
 * bisection against the preceding grid point) and ka_star_delta_t_E_bar.
 */
inline Table coincidence_sweep(std::vector<double> const& ka_list, double k, double M = 1,
                               unsigned workers = 1)
{
    if (ka_list.empty() || !(k > 0) || !(M > 0))
    {
        throw std::invalid_argument("coincidence_sweep: need ka values, k > 0 and M > 0");
    }
    for (std::size_t i = 0; i < ka_list.size(); ++i)
    {
        if (!(ka_list[i] > 0) || (i > 0 && !(ka_list[i] > ka_list[i - 1])))
        {
            throw std::invalid_argument("coincidence_sweep: ka values must be positive and increasing");
        }
    }
    Table t;
    t.experiment = "coincidence";
    t.parameter = "ka";
    t.columns = {"a",          "delta_0",          "delta_1",         "shift_ratio",
                 "shadow_sharpness", "anisotropy", "isotropic",       "small_ka_residual",
                 "large_ka_residual", "total_cross_section", "delta_t_c", "E_bar",
                 "delta_t_c_E_bar", "truncation_warning"};
    t.rows.resize(ka_list.size());
    double const nan = std::numeric_limits<double>::quiet_NaN();
    parallel_for(ka_list.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
        {
            double const ka = ka_list[i];
            double const a = ka / k;
            disk::PartialWaveSum const pw(k, a);
            double const d0 = pw.shifts()[0].delta;
            double const d1 = pw.shifts()[1].delta;
            double const aniso = anisotropy(pw);
            double const small = ka < 0.1
                                     ? std::abs(d0 - disk::small_ka_shift(0, ka))
                                           / disk::small_ka_shift(0, ka)
                                     : nan;
            double const large
                = ka > 10 ? disk::distance_mod_pi(d0, disk::large_ka_shift(0, ka)) : nan;
            double const window = a * M / k;
            double const energy = k * k / (2 * M);
            SweepRow row;
            row.value = ka;
            row.values = {a,     d0,    d1, d1 / d0, disk::shadow_sharpness(pw), aniso,
                          aniso < isotropy_limit ? 1.0 : 0.0, small, large,
                          disk::total_cross_section(pw), window, energy, window * energy,
                          pw.truncation_warning() ? 1.0 : 0.0};
            if (pw.truncation_warning())
            {
                row.diag.flag("truncation");
            }
            t.rows[i] = std::move(row);
        }
    });
    auto const ratio = t.column_index("shift_ratio");
    for (std::size_t i = 0; i < t.rows.size(); ++i)
    {
        if (t.rows[i].values[ratio] > coincidence_ratio_threshold)
        {
            double ka_star = ka_list[i];
            if (i > 0)
            {
                ka_star = refine_crossover(ka_list[i - 1], ka_list[i]);
            }
            t.summary["ka_star"] = ka_star;
            t.summary["ka_star_delta_t_E_bar"] = ka_star / 2;
            break;
        }
    }
    return t;
}

//! n log-spaced values from lo to hi inclusive.
inline std::vector<double> log_space(double lo, double hi, std::size_t n)
{
    if (!(lo > 0) || !(hi > lo) || n < 2)
    {
        throw std::invalid_argument("log_space: need 0 < lo < hi and n >= 2");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.back() = hi;
    return out;
}

}  // namespace qorder::experiments
