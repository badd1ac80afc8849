#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qorder/qorder.hpp"

namespace qorder::cli
{

//! Bad value that survived parsing (out-of-range angle, empty list, ...).
class usage_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Input or output file could not be read or written.
class io_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct HalfPlaneOptions
{
    std::string mode = "amplitude";  //!< amplitude | field | sigma-f
    std::vector<double> k{1.0};
    double theta0 = std::numbers::pi / 4;
    double cone = halfplane::default_failure_cone;
    std::size_t points = 360;
    std::vector<double> r{1.0, 10.0, 100.0};
};

struct DiskOptions
{
    std::string mode = "ratio";  //!< ratio | shifts | cross-section
    double k = 1;
    double ka = 1;
    double ka_min = 1e-3;
    double ka_max = 100;
    std::size_t points = 200;
    int m_max = -1;  //!< -1 = truncation order
};

struct EvolveCommandOptions
{
    std::string mask = "edge";
    double a = 1;
    double cx = 0;
    double cy = 0;
    double x0 = 10;
    double y0 = 10;
    double kx = -3;
    double ky = -3;
    double width = 2;
    double mass_x = 1;
    double mass_y = 1;
    double extent = 30;
    double ppw = 12;
    std::size_t grid = 0;
    double dt = 0;
    double t_end = 5;
    long record_every = 0;
    long checkpoint_every = 0;
    std::string resume;
};

struct SweepOrderOptions
{
    std::vector<double> k;
    std::vector<double> ky;
    double kx = 4;
    double theta0 = std::numbers::pi / 4;
    double width = 0;  //!< 0 = auto: max(2, 5 / smallest k)
    double ppw = 12;
    std::size_t grid = 0;
    double M = 1;
    bool convergence = false;
    std::vector<double> thresholds{0.05, 0.1, 0.2};
};

struct CoincidenceOptions
{
    double k = 1;
    double M = 1;
    double ka_min = 1e-3;
    double ka_max = 50;
    std::size_t points = 60;
};

struct MicroscopeOptions
{
    double k = 1;
    double a = 1;
    std::vector<double> offsets{0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2};
    double angular_spread = 0.3;
    std::size_t angles = 2048;
};

struct ReportOptions
{
    std::string order;
    std::string coincidence;
};

//! Fully resolved configuration of one invocation.
struct RunConfig
{
    std::string subcommand;
    std::string config_file;
    std::string output_dir = ".";
    std::vector<std::string> formats{"csv", "json"};
    std::string name;  //!< output stem; empty = subcommand name
    unsigned workers = 0;

    HalfPlaneOptions halfplane;
    DiskOptions disk;
    EvolveCommandOptions evolve;
    SweepOrderOptions sweep_order;
    CoincidenceOptions coincidence;
    MicroscopeOptions microscope;
    ReportOptions report;

    std::string stem() const { return name.empty() ? subcommand : name; }

    bool wants(std::string const& format) const
    {
        for (auto const& f : formats)
        {
            if (f == format)
            {
                return true;
            }
        }
        return false;
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["subcommand"] = subcommand;
        j["config_file"] = config_file;
        j["output_dir"] = output_dir;
        j["formats"] = formats;
        j["name"] = stem();
        j["workers"] = workers;
        nlohmann::ordered_json p;
        if (subcommand == "halfplane")
        {
            auto const& o = halfplane;
            p = {{"mode", o.mode}, {"k", o.k},         {"theta0", o.theta0},
                 {"cone", o.cone}, {"points", o.points}, {"r", o.r}};
        }
        else if (subcommand == "disk")
        {
            auto const& o = disk;
            p = {{"mode", o.mode},       {"k", o.k},           {"ka", o.ka},
                 {"ka_min", o.ka_min},   {"ka_max", o.ka_max}, {"points", o.points},
                 {"m_max", o.m_max}};
        }
        else if (subcommand == "evolve")
        {
            auto const& o = evolve;
            p = {{"mask", o.mask},         {"a", o.a},
                 {"cx", o.cx},             {"cy", o.cy},
                 {"x0", o.x0},             {"y0", o.y0},
                 {"kx", o.kx},             {"ky", o.ky},
                 {"width", o.width},       {"mass_x", o.mass_x},
                 {"mass_y", o.mass_y},     {"extent", o.extent},
                 {"ppw", o.ppw},           {"grid", o.grid},
                 {"dt", o.dt},             {"t_end", o.t_end},
                 {"record_every", o.record_every}, {"checkpoint_every", o.checkpoint_every},
                 {"resume", o.resume}};
        }
        else if (subcommand == "sweep-order")
        {
            auto const& o = sweep_order;
            p = {{"k", o.k},         {"ky", o.ky},       {"kx", o.kx},
                 {"theta0", o.theta0}, {"width", o.width}, {"ppw", o.ppw},
                 {"grid", o.grid},   {"M", o.M},         {"convergence", o.convergence},
                 {"thresholds", o.thresholds}};
        }
        else if (subcommand == "sweep-coincidence")
        {
            auto const& o = coincidence;
            p = {{"k", o.k},           {"M", o.M},           {"ka_min", o.ka_min},
                 {"ka_max", o.ka_max}, {"points", o.points}};
        }
        else if (subcommand == "microscope")
        {
            auto const& o = microscope;
            p = {{"k", o.k},
                 {"a", o.a},
                 {"offsets", o.offsets},
                 {"angular_spread", o.angular_spread},
                 {"angles", o.angles}};
        }
        else if (subcommand == "report")
        {
            p = {{"order", report.order}, {"coincidence", report.coincidence}};
        }
        j["parameters"] = p;
        return j;
    }
};

//! What a subcommand produced: a table or a free-form record, plus side files.
struct CommandResult
{
    std::optional<experiments::Table> table;
    std::optional<nlohmann::ordered_json> record;
    std::vector<std::string> extra_outputs;
    std::string error;  //!< set when the result is partial
};

namespace detail
{
inline std::vector<double> linear_angles(std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        out[i] = 2 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    }
    return out;
}

inline double region_code(halfplane::RegionTag tag)
{
    switch (tag)
    {
        case halfplane::RegionTag::illuminated: return 0;
        case halfplane::RegionTag::reflection: return 1;
        case halfplane::RegionTag::shadow: return 2;
    }
    return -1;
}

inline double quadrant_number(halfplane::Quadrant q)
{
    return static_cast<double>(static_cast<int>(q) + 1);
}

inline void require(bool ok, std::string const& message)
{
    if (!ok)
    {
        throw usage_error(message);
    }
}
}  // namespace detail

//---------------------------------------------------------------------------//
inline experiments::Table run_halfplane(HalfPlaneOptions const& o)
{
    using namespace halfplane;
    double const nan = std::numeric_limits<double>::quiet_NaN();
    detail::require(!o.k.empty(), "halfplane: --k needs at least one value");
    experiments::Table t;
    t.experiment = "halfplane_" + o.mode;
    if (o.mode == "sigma-f")
    {
        t.parameter = "k";
        t.columns = {"theta0", "cone_halfwidth", "sigma_f", "closed_form",
                     "forbidden_quadrant", "min_separation"};
        for (double k : o.k)
        {
            experiments::SweepRow row;
            row.value = k;
            double const closed = failure_closed_form(k, o.theta0);
            HalfPlaneConfig const cfg{k, o.theta0};
            if (o.theta0 > 0)
            {
                auto const f = failure_cross_section(cfg, o.cone);
                row.values = {o.theta0, o.cone, f.sigma_f, closed,
                              forbidden_quadrant_cross_section(cfg),
                              min_resolvable_separation(cfg)};
            }
            else
            {
                // At normal incidence a shadow boundary lies on the screen.
                row.values = {o.theta0, o.cone, nan, closed, nan, 2 / k};
                row.diag.flag("theta0=0: only the closed form is evaluated");
            }
            t.rows.push_back(std::move(row));
        }
        if (o.k.size() >= 2 && o.theta0 > 0)
        {
            double const s0 = t.rows.front().values[2];
            double const s1 = t.rows.back().values[2];
            t.summary["sigma_f_loglog_slope"]
                = std::log(s1 / s0) / std::log(o.k.back() / o.k.front());
        }
        return t;
    }
    if (o.mode == "amplitude")
    {
        t.parameter = "theta";
        t.columns = {"k", "re_f", "im_f", "abs_f2", "region", "quadrant"};
        for (double k : o.k)
        {
            HalfPlaneConfig const cfg{k, o.theta0};
            cfg.validate();
            for (double th : detail::linear_angles(o.points))
            {
                experiments::SweepRow row;
                row.value = th;
                auto const label = classify_region(th, cfg);
                ComplexValue f{nan, nan};
                try
                {
                    f = scattering_amplitude(th, cfg);
                }
                catch (pole_error const&)
                {
                    row.diag.flag("pole");
                }
                row.values = {k, f.real(), f.imag(), std::norm(f), detail::region_code(label.tag),
                              detail::quadrant_number(label.quadrant)};
                t.rows.push_back(std::move(row));
            }
        }
        return t;
    }
    if (o.mode == "field")
    {
        t.parameter = "r";
        t.columns = {"k", "theta", "re_psi", "im_psi", "abs_psi", "region"};
        for (double k : o.k)
        {
            HalfPlaneConfig const cfg{k, o.theta0};
            cfg.validate();
            for (double r : o.r)
            {
                detail::require(r > 0, "halfplane: --r values must be positive");
                for (double th : detail::linear_angles(o.points))
                {
                    experiments::SweepRow row;
                    row.value = r;
                    auto const psi = exact_field(r, th, cfg);
                    row.values = {k, th, psi.real(), psi.imag(), std::abs(psi),
                                  detail::region_code(classify_region(th, cfg).tag)};
                    t.rows.push_back(std::move(row));
                }
            }
        }
        return t;
    }
    throw usage_error("halfplane: unknown mode '" + o.mode + "'");
}

//---------------------------------------------------------------------------//
inline experiments::Table run_disk(DiskOptions const& o, unsigned workers)
{
    double const nan = std::numeric_limits<double>::quiet_NaN();
    detail::require(o.k > 0, "disk: --k must be positive");
    experiments::Table t;
    t.experiment = "disk_" + o.mode;
    if (o.mode == "ratio")
    {
        detail::require(o.ka_min > 0 && o.ka_max > o.ka_min && o.points >= 2,
                        "disk: need 0 < --ka-min < --ka-max and --points >= 2");
        auto const kas = experiments::log_space(o.ka_min, o.ka_max, o.points);
        t.parameter = "ka";
        t.columns = {"a", "delta_0", "delta_1", "shift_ratio"};
        t.rows.resize(kas.size());
        parallel_for(kas.size(), workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
            {
                auto const s = disk::phase_shifts(1, kas[i]);
                experiments::SweepRow row;
                row.value = kas[i];
                row.values = {kas[i] / o.k, s[0].delta, s[1].delta, s[1].delta / s[0].delta};
                t.rows[i] = std::move(row);
            }
        });
        return t;
    }
    detail::require(o.ka > 0, "disk: --ka must be positive");
    disk::PartialWaveSum const pw(o.k, o.ka / o.k);
    if (o.mode == "shifts")
    {
        int const m_max = o.m_max < 0 ? pw.m_max() : o.m_max;
        auto const shifts = disk::phase_shifts(m_max, o.ka);
        t.parameter = "m";
        t.columns = {"ka", "delta", "small_ka_form", "large_ka_form"};
        for (auto const& s : shifts)
        {
            experiments::SweepRow row;
            row.value = s.m;
            double small = nan;
            try
            {
                small = disk::small_ka_shift(s.m, o.ka);
            }
            catch (regime_error const&)
            {
            }
            double large = nan;
            try
            {
                large = disk::large_ka_shift(s.m, o.ka);
            }
            catch (regime_error const&)
            {
            }
            row.values = {o.ka, s.delta, small, large};
            t.rows.push_back(std::move(row));
        }
        return t;
    }
    if (o.mode == "cross-section")
    {
        t.parameter = "theta";
        t.columns = {"sigma"};
        auto const profile = disk::cross_section_profile(pw, std::max<std::size_t>(o.points, 8));
        for (std::size_t i = 0; i < profile.angles.size(); ++i)
        {
            experiments::SweepRow row;
            row.value = profile.angles[i];
            row.values = {profile.values[i]};
            t.rows.push_back(std::move(row));
        }
        t.summary["total_profile"] = profile.total;
        t.summary["total_optical"] = disk::total_cross_section(pw);
        t.summary["shadow_sharpness"] = disk::shadow_sharpness(pw);
        t.summary["anisotropy"] = experiments::anisotropy(pw);
        t.summary["truncation_warning"] = pw.truncation_warning() ? 1 : 0;
        return t;
    }
    throw usage_error("disk: unknown mode '" + o.mode + "'");
}

//---------------------------------------------------------------------------//
/*!
 * Single mapped-plane simulation. Observables are recorded every
 * `record_every` steps; checkpoints are written every `checkpoint_every`.
 * If the solver fails, the rows recorded so far are returned with `error`.
 */
inline CommandResult run_evolve(EvolveCommandOptions const& o, std::string const& out_dir,
                                std::string const& stem, unsigned workers)
{
    using namespace dynamics;
    detail::require(o.width > 0 && o.mass_x > 0 && o.mass_y > 0 && o.extent > 0 && o.ppw > 0,
                    "evolve: --width, masses, --extent and --ppw must be positive");
    detail::require(o.t_end > 0, "evolve: --t-end must be positive");
    detail::require(o.grid == 0 || o.grid >= 16, "evolve: --grid must be 0 or >= 16");

    GridState g;
    if (!o.resume.empty())
    {
        try
        {
            g = load_checkpoint(o.resume);
        }
        catch (std::exception const& e)
        {
            throw io_error(e.what());
        }
    }
    else
    {
        double const k = std::hypot(o.kx, o.ky);
        double h = 2 * std::numbers::pi / (std::max(k, 1.0) * o.ppw);
        auto nodes = 2 * static_cast<std::size_t>(std::ceil(o.extent / h)) + 1;
        if (o.grid != 0 && nodes > o.grid)
        {
            h = o.extent / static_cast<double>((o.grid - 1) / 2);
        }
        g = make_centered_grid(o.extent, o.extent, h, h);
        fill_gaussian(g, {o.x0, o.width, o.kx}, {o.y0, o.width, o.ky});
    }
    detail::require(o.t_end > g.time, "evolve: --t-end must exceed the start time");
    auto const kind = mask_kind_from_string(o.mask);
    auto const mask = make_mask(g, kind, o.a, o.cx, o.cy);
    apply_mask(g, mask);

    EvolveOptions opt;
    opt.mass_x = o.mass_x;
    opt.mass_y = o.mass_y;
    opt.workers = workers;
    std::vector<std::string> warnings;
    opt.on_warning = [&warnings](std::string const& w) { warnings.push_back(w); };
    // An explicit dt is used as given so that resumed runs repeat the same steps.
    long steps = 0;
    double dt = o.dt;
    if (o.dt > 0)
    {
        steps = std::max(1L, std::lround((o.t_end - g.time) / o.dt));
    }
    else
    {
        double const dt_max = 0.9 * accuracy_dt_bound(g, opt);
        steps = static_cast<long>(std::ceil((o.t_end - g.time) / dt_max));
        dt = (o.t_end - g.time) / static_cast<double>(steps);
    }
    long const record = o.record_every > 0 ? o.record_every : std::max(1L, steps / 20);
    Propagator prop(g, mask, dt, opt);

    CommandResult result;
    experiments::Table t;
    t.experiment = "evolve";
    t.parameter = "time";
    t.columns = {"step",     "norm", "mean_x", "mean_y", "p1", "p2", "p3",
                 "p4",       "kinetic_energy"};
    t.summary["dt"] = dt;
    t.summary["h"] = g.hx;
    t.summary["nodes"] = static_cast<double>(g.nx);
    double const n0 = norm(g);
    double const k = std::hypot(o.kx, o.ky);
    auto record_row = [&](long step) {
        auto const m = moments(g);
        auto const q = quadrant_probabilities(g);
        experiments::SweepRow row;
        row.value = g.time;
        double const n = norm(g);
        row.values = {static_cast<double>(step), n, m.mean_x, m.mean_y, q.p1, q.p2, q.p3, q.p4,
                      kinetic_energy(g, o.mass_x, o.mass_y)};
        row.diag.norm_drift = std::abs(n - n0);
        row.diag.boundary_probability = boundary_probability(g, 3);
        row.diag.dk_over_k = k > 0 ? 1 / (2 * o.width * k) : 0;
        row.diag.points_per_wavelength = k > 0 ? 2 * std::numbers::pi / (k * g.hx) : 0;
        if (row.diag.norm_drift > 1e-4)
        {
            row.diag.flag("norm_drift>1e-4");
        }
        if (row.diag.boundary_probability > 1e-6)
        {
            row.diag.flag("boundary_probability>1e-6");
        }
        for (auto const& w : warnings)
        {
            row.diag.flag("accuracy: " + w);
        }
        t.rows.push_back(std::move(row));
    };
    auto checkpoint = [&](long step) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ".%08ld.qgrid", step);
        auto const path = (std::filesystem::path(out_dir) / (stem + buf)).string();
        try
        {
            save_checkpoint(path, g);
        }
        catch (std::exception const& e)
        {
            throw io_error(e.what());
        }
        result.extra_outputs.push_back(path);
    };

    record_row(0);
    long done = 0;
    try
    {
        while (done < steps)
        {
            long chunk = std::min(record, steps - done);
            if (o.checkpoint_every > 0)
            {
                chunk = std::min(chunk, o.checkpoint_every - done % o.checkpoint_every);
            }
            prop.advance(g, chunk);
            done += chunk;
            if (done % record == 0 || done == steps)
            {
                record_row(done);
            }
            if (o.checkpoint_every > 0 && (done % o.checkpoint_every == 0 || done == steps))
            {
                checkpoint(done);
            }
        }
    }
    catch (numeric_error const& e)
    {
        result.error = e.what();
    }
    result.table = std::move(t);
    return result;
}

//---------------------------------------------------------------------------//
inline experiments::Table run_sweep_order(SweepOrderOptions const& o, unsigned workers)
{
    bool const by_k = !o.k.empty();
    detail::require(by_k != !o.ky.empty(), "sweep-order: give exactly one of --k or --ky");
    experiments::SweepSpec spec;
    spec.parameter = by_k ? "k" : "ky";
    spec.values = by_k ? o.k : o.ky;
    spec.convergence_check = o.convergence;
    auto& s = spec.order;
    s.M = o.M;
    s.theta0 = o.theta0;
    s.kx_fixed = o.kx;
    s.points_per_wavelength = o.ppw;
    s.max_nodes = o.grid;
    s.workers = workers;
    if (o.width > 0)
    {
        s.width = o.width;
    }
    else
    {
        double k_min = spec.values.front();
        for (double v : spec.values)
        {
            k_min = std::min(k_min, v);
        }
        if (!by_k)
        {
            k_min = std::hypot(o.kx, k_min);
        }
        s.width = std::max(2.0, 5 / k_min);
    }
    try
    {
        spec.validate();
    }
    catch (std::invalid_argument const& e)
    {
        throw usage_error(e.what());
    }
    auto t = experiments::order_failure_sweep(spec);
    t.summary["width"] = s.width;
    if (by_k)
    {
        try
        {
            auto const fit = experiments::fit_failure_threshold(t, s, o.thresholds);
            experiments::record_threshold_fit(t, fit);
        }
        catch (std::exception const& e)
        {
            // Too few usable rows: keep the table, report no threshold.
            t.summary.erase("fit_amplitude");
            std::fprintf(stderr, "qorder sweep-order: no threshold fit: %s\n", e.what());
        }
    }
    return t;
}

//---------------------------------------------------------------------------//
inline nlohmann::ordered_json run_report(ReportOptions const& o)
{
    auto load = [](std::string const& path) -> std::optional<experiments::Table> {
        if (path.empty())
        {
            return std::nullopt;
        }
        std::ifstream is(path);
        if (!is)
        {
            throw io_error("report: cannot read '" + path + "'");
        }
        try
        {
            return experiments::table_from_json(nlohmann::json::parse(is));
        }
        catch (nlohmann::json::exception const& e)
        {
            throw io_error("report: '" + path + "' is not a table: " + e.what());
        }
        catch (std::runtime_error const& e)
        {
            throw io_error("report: '" + path + "': " + e.what());
        }
    };
    auto const order = load(o.order);
    auto const coincidence = load(o.coincidence);
    auto const r = experiments::bound_report(order ? &*order : nullptr,
                                             coincidence ? &*coincidence : nullptr);
    return experiments::to_json(r);
}

//---------------------------------------------------------------------------//
//! Dispatch on `cfg.subcommand`; throws usage_error, io_error or numeric_error.
inline CommandResult run_command(RunConfig const& cfg)
{
    unsigned const workers = resolve_workers(cfg.workers);
    CommandResult result;
    auto const& sub = cfg.subcommand;
    if (sub == "halfplane")
    {
        result.table = run_halfplane(cfg.halfplane);
    }
    else if (sub == "disk")
    {
        result.table = run_disk(cfg.disk, workers);
    }
    else if (sub == "evolve")
    {
        std::filesystem::create_directories(cfg.output_dir);
        result = run_evolve(cfg.evolve, cfg.output_dir, cfg.stem(), workers);
    }
    else if (sub == "sweep-order")
    {
        result.table = run_sweep_order(cfg.sweep_order, workers);
        if (result.table->has_errors())
        {
            result.error = "one or more sweep points failed; see row flags";
        }
    }
    else if (sub == "sweep-coincidence")
    {
        auto const& o = cfg.coincidence;
        detail::require(o.ka_min > 0 && o.ka_max > o.ka_min && o.points >= 2,
                        "sweep-coincidence: need 0 < --ka-min < --ka-max and --points >= 2");
        result.table = experiments::coincidence_sweep(
            experiments::log_space(o.ka_min, o.ka_max, o.points), o.k, o.M, workers);
    }
    else if (sub == "microscope")
    {
        auto const& o = cfg.microscope;
        experiments::MicroscopeSettings s;
        s.angular_spread = o.angular_spread;
        s.angles = o.angles;
        result.table = experiments::microscope_sweep(o.offsets, o.k, o.a, s, workers);
    }
    else if (sub == "report")
    {
        result.record = run_report(cfg.report);
    }
    else
    {
        throw usage_error("unknown subcommand '" + sub + "'");
    }
    return result;
}

}  // namespace qorder::cli
