#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qorder/dynamics.hpp"
#include "qorder/errors.hpp"
#include "qorder/experiments/table.hpp"
#include "qorder/halfplane.hpp"
#include "qorder/parallel.hpp"

namespace qorder::experiments
{

/*!
 * Template for the knife-edge order-of-arrival runs in the mapped plane.
 *
 * Both packets are isotropic Gaussians of position width `width` that start
 * `start_widths` widths from the axes along the incidence direction. The run
 * stops once the packet center is `after_widths` transverse widths past the
 * origin, measured perpendicular to the nearer axis.
 */
struct OrderSettings
{
    double M = 1;
    double width = 2;
    double theta0 = std::numbers::pi / 4;
    double kx_fixed = 4;  //!< x wavenumber when sweeping "ky"
    double points_per_wavelength = 12;
    std::size_t max_nodes = 0;  //!< per-axis node cap; 0 = uncapped
    double dt_factor = 0.9;     //!< dt = dt_factor * h^2 M / 2
    double start_widths = 5.5;
    double after_widths = 4.5;
    double margin_widths = 5.5;
    unsigned workers = 1;

    void validate() const
    {
        if (!(M > 0) || !(width > 0) || !(points_per_wavelength > 0) || !(dt_factor > 0)
            || !(start_widths >= 5) || !(after_widths > 0) || !(margin_widths > 0))
        {
            throw std::invalid_argument("OrderSettings: parameters must be positive "
                                        "and start_widths >= 5");
        }
        if (!(theta0 > 0 && theta0 < std::numbers::pi / 2))
        {
            throw std::invalid_argument("OrderSettings: theta0 must lie in (0, pi/2)");
        }
        if (max_nodes != 0 && max_nodes < 16)
        {
            throw std::invalid_argument("OrderSettings: max_nodes must be 0 or >= 16");
        }
    }
};

//! Geometry and discretization of one run, fixed before any evolution.
struct OrderPlan
{
    double kx = 0;
    double ky = 0;
    double k = 0;
    double theta = 0;        //!< incidence angle atan2(ky, kx)
    double start_distance = 0;
    double t_arrival = 0;
    double t_measure = 0;
    double width_arrival = 0;  //!< transverse width when the center hits the origin
    double half_extent = 0;
    double h = 0;
    double dt = 0;
    long steps = 0;
    std::size_t nodes = 0;  //!< per axis
    bool capped = false;
    double mean_energy = 0;  //!< <E> = (k^2 + 1/(2 w^2)) / (2M)
    double dk_over_k = 0;    //!< momentum spread per axis over k
};

/*!
 * Arrival geometry shared by the plan and the threshold fit: start distance,
 * arrival time, transverse width at arrival and mean energy.
 */
inline OrderPlan arrival_geometry(double kx, double ky, OrderSettings const& s)
{
    OrderPlan p;
    p.kx = kx;
    p.ky = ky;
    p.k = std::hypot(kx, ky);
    p.theta = std::atan2(ky, kx);
    double const lo = std::min(std::cos(p.theta), std::sin(p.theta));
    p.start_distance = s.start_widths * s.width / lo;
    p.t_arrival = p.start_distance * s.M / p.k;
    p.width_arrival = dynamics::free_width(s.width, p.t_arrival, s.M);
    p.mean_energy = (p.k * p.k + 1 / (2 * s.width * s.width)) / (2 * s.M);
    p.dk_over_k = 1 / (2 * s.width * p.k);
    return p;
}

inline OrderPlan plan_order_run(double kx, double ky, OrderSettings const& s)
{
    s.validate();
    if (!(kx > 0) || !(ky > 0))
    {
        throw std::invalid_argument("plan_order_run: wavenumbers must be positive");
    }
    OrderPlan p = arrival_geometry(kx, ky, s);
    double const c = std::cos(p.theta);
    double const sn = std::sin(p.theta);
    double const lo = std::min(c, sn);
    double const hi = std::max(c, sn);
    double const speed = p.k / s.M;
    // The stopping distance depends on the width at the stopping time.
    double after = s.after_widths * s.width / lo;
    double width_end = s.width;
    // Late-time spreading adds after_widths / (2 M width lo) to the stopping
    // distance per unit time; it must stay below the packet speed.
    if (s.after_widths / (2 * s.M * s.width * lo) >= speed)
    {
        throw std::invalid_argument(
            "plan_order_run: packet spreads faster than it travels; raise k or width");
    }
    for (int i = 0; i < 200; ++i)
    {
        p.t_measure = (p.start_distance + after) / speed;
        width_end = dynamics::free_width(s.width, p.t_measure, s.M);
        after = s.after_widths * width_end / lo;
    }
    p.t_measure = (p.start_distance + after) / speed;
    p.half_extent = std::max(p.start_distance * hi + s.margin_widths * s.width,
                             after + s.margin_widths * width_end);
    p.h = 2 * std::numbers::pi / (p.k * s.points_per_wavelength);
    p.nodes = 2 * static_cast<std::size_t>(std::ceil(p.half_extent / p.h)) + 1;
    if (s.max_nodes != 0 && p.nodes > s.max_nodes)
    {
        std::size_t const cells = (s.max_nodes - 1) / 2;
        p.h = p.half_extent / static_cast<double>(cells);
        p.nodes = 2 * cells + 1;
        p.capped = true;
    }
    double const dt_max = s.dt_factor * p.h * p.h * s.M / 2;
    p.steps = static_cast<long>(std::ceil(p.t_measure / dt_max));
    p.dt = p.t_measure / static_cast<double>(p.steps);
    return p;
}

//! Arrival-time spread (transverse width at arrival) * M / k.
inline double arrival_spread(OrderPlan const& p, OrderSettings const& s)
{
    return p.width_arrival * s.M / p.k;
}

/*!
 * Diffraction estimate of p_fail: the knife-edge cross section into
 * quadrants I and II times the peak transverse density 1/(sqrt(2 pi) w).
 */
inline double analytic_failure(OrderPlan const& p)
{
    halfplane::HalfPlaneConfig const cfg{p.k, p.theta};
    return halfplane::forbidden_quadrant_cross_section(cfg)
           / (std::sqrt(2 * std::numbers::pi) * p.width_arrival);
}

struct OrderRun
{
    OrderPlan plan;
    dynamics::QuadrantProbabilities quadrants;
    dynamics::OrderOutcome outcome;
    Diagnostics diag;
};

inline OrderRun order_failure_run(double kx, double ky, OrderSettings const& s,
                                  unsigned workers = 1)
{
    using namespace dynamics;
    OrderRun run;
    run.plan = plan_order_run(kx, ky, s);
    auto const& p = run.plan;
    auto grid = make_centered_grid(p.half_extent, p.half_extent, p.h, p.h);
    double const c = std::cos(p.theta);
    double const sn = std::sin(p.theta);
    fill_gaussian(grid, {p.start_distance * c, s.width, -kx},
                  {p.start_distance * sn, s.width, -ky});
    auto const edge = make_mask(grid, MaskKind::edge);
    apply_mask(grid, edge);
    double const n0 = norm(grid);
    EvolveOptions opt;
    opt.mass_x = s.M;
    opt.mass_y = s.M;
    opt.workers = workers;
    opt.on_warning = [&run](std::string const& w) { run.diag.flag("accuracy: " + w); };
    Propagator prop(grid, edge, p.dt, opt);
    prop.advance(grid, p.steps);

    run.quadrants = quadrant_probabilities(grid);
    run.outcome = classify_outcome(run.quadrants);
    auto const band = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::ceil(0.5 * s.width / p.h)));
    run.diag.norm_drift = std::abs(norm(grid) - n0);
    run.diag.boundary_probability = boundary_probability(grid, band);
    run.diag.dk_over_k = p.dk_over_k;
    run.diag.points_per_wavelength = 2 * std::numbers::pi / (p.k * p.h);
    if (run.diag.boundary_probability > 1e-6)
    {
        run.diag.flag("boundary_probability>1e-6");
    }
    if (run.diag.norm_drift > 1e-4)
    {
        run.diag.flag("norm_drift>1e-4");
    }
    if (p.dk_over_k > 0.1)
    {
        run.diag.flag("dk/k>0.1");
    }
    if (p.capped && run.diag.points_per_wavelength < 12)
    {
        run.diag.flag("grid_cap:ppw<12");
    }
    return run;
}

//---------------------------------------------------------------------------//
/*!
 * A parameter sweep: which value list to run and with which template.
 *
 * For the order experiment the parameter is "k" (symmetric incidence at
 * theta0) or "ky" (x wavenumber held at kx_fixed).
 */
struct SweepSpec
{
    std::string experiment = "order_failure";
    std::string parameter = "k";
    std::vector<double> values;
    OrderSettings order;
    std::string output_path;
    //! Re-run the first point at half the spacing and record the change.
    bool convergence_check = false;

    void validate() const
    {
        if (values.empty())
        {
            throw std::invalid_argument("SweepSpec: value list is empty");
        }
        bool up = true;
        bool down = true;
        for (std::size_t i = 1; i < values.size(); ++i)
        {
            up = up && values[i] > values[i - 1];
            down = down && values[i] < values[i - 1];
        }
        if (values.size() > 1 && !up && !down)
        {
            throw std::invalid_argument("SweepSpec: values must be strictly monotone");
        }
        for (double v : values)
        {
            if (!(v > 0) || !std::isfinite(v))
            {
                throw std::invalid_argument("SweepSpec: values must be positive");
            }
        }
        order.validate();
    }
};

inline std::vector<std::string> order_columns()
{
    return {"kx",        "ky",           "k",           "E_bar",      "width_arrival",
            "delta_t",   "delta_t_E_bar", "p_fail",     "p_reflected", "p_x_first",
            "p_y_first", "p_fail_k_w",   "p_fail_analytic", "h",      "steps"};
}

inline SweepRow order_row(double value, OrderRun const& run, OrderSettings const& s)
{
    auto const& p = run.plan;
    double const dt_spread = arrival_spread(p, s);
    SweepRow row;
    row.value = value;
    row.values = {p.kx,
                  p.ky,
                  p.k,
                  p.mean_energy,
                  p.width_arrival,
                  dt_spread,
                  dt_spread * p.mean_energy,
                  run.outcome.p_fail,
                  run.outcome.p_reflected,
                  run.outcome.p_x_first,
                  run.outcome.p_y_first,
                  run.outcome.p_fail * p.k * p.width_arrival,
                  analytic_failure(p),
                  p.h,
                  static_cast<double>(p.steps)};
    row.diag = run.diag;
    return row;
}

//! Placeholder for a point whose simulation failed; carries an "error:" flag.
inline SweepRow failed_row(double value, double kx, double ky, std::string const& what)
{
    SweepRow row;
    row.value = value;
    row.values.assign(order_columns().size(), std::numeric_limits<double>::quiet_NaN());
    row.values[0] = kx;
    row.values[1] = ky;
    row.values[2] = std::hypot(kx, ky);
    row.diag.norm_drift = std::numeric_limits<double>::quiet_NaN();
    row.diag.boundary_probability = std::numeric_limits<double>::quiet_NaN();
    row.diag.flag("error: " + what);
    return row;
}

//! Relative change of p_fail when the spacing is halved.
inline double order_convergence(double kx, double ky, OrderSettings const& s,
                                unsigned workers = 1)
{
    auto fine = s;
    fine.points_per_wavelength *= 2;
    if (fine.max_nodes != 0)
    {
        fine.max_nodes = 2 * fine.max_nodes - 1;
    }
    double const coarse = order_failure_run(kx, ky, s, workers).outcome.p_fail;
    double const refined = order_failure_run(kx, ky, fine, workers).outcome.p_fail;
    return std::abs(coarse - refined) / refined;
}

/*!
 * Run every sweep point (concurrently when workers > 1; each point is
 * computed independently so the table does not depend on scheduling).
 */
inline Table order_failure_sweep(SweepSpec const& spec)
{
    spec.validate();
    if (spec.parameter != "k" && spec.parameter != "ky")
    {
        throw std::invalid_argument("order_failure_sweep: parameter must be 'k' or 'ky'");
    }
    auto const& s = spec.order;
    auto wavenumbers = [&](double v) {
        if (spec.parameter == "k")
        {
            return std::pair{v * std::cos(s.theta0), v * std::sin(s.theta0)};
        }
        return std::pair{s.kx_fixed, v};
    };
    Table t;
    t.experiment = spec.experiment;
    t.parameter = spec.parameter;
    t.columns = order_columns();
    t.rows.resize(spec.values.size());
    unsigned const workers = resolve_workers(s.workers);
    unsigned const outer = std::min<unsigned>(workers, static_cast<unsigned>(spec.values.size()));
    unsigned const inner = std::max(1u, workers / std::max(1u, outer));
    parallel_for(spec.values.size(), outer, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
        {
            auto const [kx, ky] = wavenumbers(spec.values[i]);
            try
            {
                t.rows[i] = order_row(spec.values[i], order_failure_run(kx, ky, s, inner), s);
            }
            catch (numeric_error const& e)
            {
                t.rows[i] = failed_row(spec.values[i], kx, ky, e.what());
            }
        }
    });
    if (spec.convergence_check)
    {
        auto const [kx, ky] = wavenumbers(spec.values.front());
        double const change = order_convergence(kx, ky, s, workers);
        t.summary["convergence_rel_change"] = change;
        if (change > 0.1)
        {
            t.rows.front().diag.flag("grid_convergence>10%");
        }
    }
    return t;
}

//---------------------------------------------------------------------------//
/*!
 * Power-law fit p_fail = A k^b over unflagged rows, and the k at which the
 * fit crosses each threshold, with the product delta_t * E_bar there.
 */
struct ThresholdFit
{
    double amplitude = 0;
    double exponent = 0;
    std::vector<double> thresholds;
    std::vector<double> k_at;
    std::vector<double> product_at;
    std::size_t rows_used = 0;
};

inline ThresholdFit fit_failure_threshold(Table const& t, OrderSettings const& s,
                                          std::vector<double> thresholds = {0.05, 0.1, 0.2})
{
    if (t.parameter != "k")
    {
        throw std::invalid_argument("fit_failure_threshold: needs a symmetric 'k' sweep");
    }
    auto const ki = t.column_index("k");
    auto const pi_ = t.column_index("p_fail");
    std::vector<double> lx;
    std::vector<double> ly;
    for (auto const& r : t.rows)
    {
        if (!r.diag.flagged() && r.values[pi_] > 0)
        {
            lx.push_back(std::log(r.values[ki]));
            ly.push_back(std::log(r.values[pi_]));
        }
    }
    if (lx.size() < 2)
    {
        throw std::runtime_error("fit_failure_threshold: need two unflagged rows");
    }
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    ThresholdFit fit;
    fit.rows_used = lx.size();
    fit.exponent = sxy / sxx;
    fit.amplitude = std::exp(my - fit.exponent * mx);
    fit.thresholds = std::move(thresholds);
    for (double thr : fit.thresholds)
    {
        double const k = std::exp((std::log(thr) - std::log(fit.amplitude)) / fit.exponent);
        fit.k_at.push_back(k);
        auto const plan
            = arrival_geometry(k * std::cos(s.theta0), k * std::sin(s.theta0), s);
        fit.product_at.push_back(arrival_spread(plan, s) * plan.mean_energy);
    }
    return fit;
}

//! Short label for a threshold in summary keys ("0.1", "0.05").
inline std::string threshold_tag(double threshold)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", threshold);
    return buf;
}

//! Store the fit in the table summary under stable keys.
inline void record_threshold_fit(Table& t, ThresholdFit const& fit)
{
    t.summary["fit_amplitude"] = fit.amplitude;
    t.summary["fit_exponent"] = fit.exponent;
    for (std::size_t i = 0; i < fit.thresholds.size(); ++i)
    {
        std::string const tag = threshold_tag(fit.thresholds[i]);
        t.summary["threshold_" + tag + "_k"] = fit.k_at[i];
        t.summary["threshold_" + tag + "_delta_t_E_bar"] = fit.product_at[i];
    }
}

}  // namespace qorder::experiments
