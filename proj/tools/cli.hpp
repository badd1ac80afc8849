#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace qorder::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numeric = 3;
inline constexpr int exit_io = 4;

inline constexpr char const* output_dir_env = "QORDER_OUTPUT_DIR";

namespace detail
{
inline void add_common(CLI::App& sub, RunConfig& cfg)
{
    sub.add_option("--out-dir", cfg.output_dir,
                   std::string("output directory; defaults to $") + output_dir_env
                       + " or the working directory [path]")
        ->envname(output_dir_env);
    sub.add_option("--format", cfg.formats, "table formats to write: csv, json [-]")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "json"}));
    sub.add_option("--name", cfg.name, "output file stem; defaults to the subcommand [-]");
    sub.add_option("--workers", cfg.workers,
                   "worker threads; 0 uses all hardware threads [count]");
}

//! Adds mutually exclusive mode flags; the chosen one is written to `mode`.
inline void add_modes(CLI::App& sub, std::string& mode,
                      std::vector<std::pair<std::string, std::string>> const& modes)
{
    std::vector<CLI::Option*> flags;
    for (auto const& [name, help] : modes)
    {
        auto* f = sub.add_flag_callback(
            "--" + name, [&mode, name = name] { mode = name; }, help + " [-]");
        flags.push_back(f);
    }
    for (auto* a : flags)
    {
        for (auto* b : flags)
        {
            if (a != b)
            {
                a->excludes(b);
            }
        }
    }
}
}  // namespace detail

/*!
 * Command-line definition bound to `cfg`. Values resolve as
 * flag > config file > environment > default.
 */
inline std::unique_ptr<CLI::App> make_app(RunConfig& cfg)
{
    auto app = std::make_unique<CLI::App>(
        "Order-of-arrival and coincidence limits on quantum time measurements", "qorder");
    app->set_version_flag("--version", QORDER_VERSION);
    app->set_config("--config", "", "TOML/INI file with one [subcommand] section [path]");
    app->allow_config_extras(CLI::config_extras_mode::error);
    app->require_subcommand(1);
    app->footer("Units: hbar = 1, masses default to M = 1. Exit codes: 0 ok, 2 usage, "
                "3 numeric failure, 4 I/O failure.");
    auto positive = CLI::PositiveNumber;

    auto* hp = app->add_subcommand("halfplane", "Knife-edge diffraction: amplitude, field, sigma_f");
    detail::add_modes(*hp, cfg.halfplane.mode,
                      {{"amplitude", "far-field amplitude f(theta) on a uniform angle grid"},
                       {"field", "exact field psi(r, theta) at the radii in --r"},
                       {"sigma-f", "failure cross section and its closed form per k"}});
    hp->add_option("--k", cfg.halfplane.k, "wavenumbers, comma separated [1/length]")
        ->delimiter(',')
        ->check(positive);
    hp->add_option("--theta0", cfg.halfplane.theta0,
                   "incidence angle from the +x axis; sigma-f accepts 0 [rad]")
        ->check(CLI::Range(0.0, std::numbers::pi / 2));
    hp->add_option("--cone", cfg.halfplane.cone,
                   "half-width of the cones excluded around shadow boundaries [rad]")
        ->check(CLI::Range(1e-6, 0.3));
    hp->add_option("--points", cfg.halfplane.points, "angles per table [count]")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    hp->add_option("--r", cfg.halfplane.r, "radii for --field, comma separated [length]")
        ->delimiter(',')
        ->check(positive);
    detail::add_common(*hp, cfg);

    auto* dk = app->add_subcommand("disk", "Hard-disk partial waves: shift ratio, shifts, sigma(theta)");
    detail::add_modes(*dk, cfg.disk.mode,
                      {{"ratio", "delta_1/delta_0 on log-spaced ka"},
                       {"shifts", "delta_m for m = 0..m-max at --ka"},
                       {"cross-section", "differential cross section at --ka"}});
    dk->add_option("--k", cfg.disk.k, "wavenumber [1/length]")->check(positive);
    dk->add_option("--ka", cfg.disk.ka, "size parameter for --shifts and --cross-section [-]")
        ->check(positive);
    dk->add_option("--ka-min", cfg.disk.ka_min, "smallest ka for --ratio [-]")->check(positive);
    dk->add_option("--ka-max", cfg.disk.ka_max, "largest ka for --ratio [-]")->check(positive);
    dk->add_option("--points", cfg.disk.points, "ka samples or angles [count]")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    dk->add_option("--m-max", cfg.disk.m_max,
                   "highest partial wave for --shifts; -1 uses the truncation order [count]")
        ->check(CLI::Range(-1, 100000));
    detail::add_common(*dk, cfg);

    auto* ev = app->add_subcommand("evolve", "Single mapped-plane simulation with checkpoints");
    auto& e = cfg.evolve;
    ev->add_option("--mask", e.mask, "hard region: none, edge, wall, disk, strip [-]")
        ->check(CLI::IsMember({"none", "edge", "wall", "disk", "strip"}));
    ev->add_option("--a", e.a, "disk radius or strip half-length [length]")->check(positive);
    ev->add_option("--cx", e.cx, "obstacle center x [length]");
    ev->add_option("--cy", e.cy, "obstacle center y [length]");
    ev->add_option("--x0", e.x0, "packet center x [length]");
    ev->add_option("--y0", e.y0, "packet center y [length]");
    ev->add_option("--kx", e.kx, "packet mean wavenumber along x [1/length]");
    ev->add_option("--ky", e.ky, "packet mean wavenumber along y [1/length]");
    ev->add_option("--width", e.width, "packet position standard deviation [length]")
        ->check(positive);
    ev->add_option("--mass-x", e.mass_x, "mass along x [mass]")->check(positive);
    ev->add_option("--mass-y", e.mass_y, "mass along y [mass]")->check(positive);
    ev->add_option("--extent", e.extent, "grid half-width [length]")->check(positive);
    ev->add_option("--ppw", e.ppw, "grid points per wavelength 2pi/|k| [count]")->check(positive);
    ev->add_option("--grid", e.grid, "cap on nodes per axis; 0 = no cap [count]");
    ev->add_option("--dt", e.dt, "time step; 0 picks 0.9 of the accuracy bound [time]")
        ->check(CLI::NonNegativeNumber);
    ev->add_option("--t-end", e.t_end, "final time [time]")->check(positive);
    ev->add_option("--record-every", e.record_every,
                   "steps between table rows; 0 = about 20 rows [count]")
        ->check(CLI::NonNegativeNumber);
    ev->add_option("--checkpoint-every", e.checkpoint_every,
                   "steps between checkpoint files; 0 = none [count]")
        ->check(CLI::NonNegativeNumber);
    ev->add_option("--resume", e.resume, "checkpoint file to continue from [path]");
    detail::add_common(*ev, cfg);

    auto* so = app->add_subcommand("sweep-order", "Order-of-arrival failure sweep over k or ky");
    auto& o = cfg.sweep_order;
    so->add_option("--k", o.k, "total wavenumbers at angle theta0, comma separated [1/length]")
        ->delimiter(',')
        ->check(positive);
    so->add_option("--ky", o.ky, "y wavenumbers at fixed --kx, comma separated [1/length]")
        ->delimiter(',')
        ->check(positive);
    so->add_option("--kx", o.kx, "fixed x wavenumber for --ky sweeps [1/length]")->check(positive);
    so->add_option("--theta0", o.theta0, "incidence angle for --k sweeps [rad]")
        ->check(CLI::Range(1e-3, std::numbers::pi / 2 - 1e-3));
    so->add_option("--width", o.width,
                   "initial packet width; 0 = max(2, 5 / smallest k) [length]")
        ->check(CLI::NonNegativeNumber);
    so->add_option("--ppw", o.ppw, "grid points per wavelength [count]")->check(positive);
    so->add_option("--grid", o.grid, "cap on nodes per axis; 0 = no cap [count]");
    so->add_option("--M", o.M, "mapped-plane mass [mass]")->check(positive);
    so->add_flag("--convergence", o.convergence,
                 "rerun the first point at half the spacing and record the change [-]");
    so->add_option("--thresholds", o.thresholds, "p_fail levels for the threshold fit [-]")
        ->delimiter(',')
        ->check(CLI::Range(1e-9, 1.0));
    detail::add_common(*so, cfg);

    auto* co = app->add_subcommand("sweep-coincidence", "Disk shift-ratio crossover sweep");
    co->add_option("--k", cfg.coincidence.k, "wavenumber [1/length]")->check(positive);
    co->add_option("--M", cfg.coincidence.M, "mass [mass]")->check(positive);
    co->add_option("--ka-min", cfg.coincidence.ka_min, "smallest ka [-]")->check(positive);
    co->add_option("--ka-max", cfg.coincidence.ka_max, "largest ka [-]")->check(positive);
    co->add_option("--points", cfg.coincidence.points, "log-spaced ka samples [count]")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    detail::add_common(*co, cfg);

    auto* mi = app->add_subcommand("microscope", "Disk-offset distinguishability sweep");
    mi->add_option("--k", cfg.microscope.k, "wavenumber [1/length]")->check(positive);
    mi->add_option("--a", cfg.microscope.a, "disk radius [length]")->check(positive);
    mi->add_option("--offsets", cfg.microscope.offsets,
                   "disk offsets in wavelengths 2pi/k, comma separated [wavelength]")
        ->delimiter(',')
        ->check(CLI::NonNegativeNumber);
    mi->add_option("--angular-spread", cfg.microscope.angular_spread,
                   "rms direction spread of the probe beam [rad]")
        ->check(positive);
    mi->add_option("--angles", cfg.microscope.angles, "detector angles [count]")
        ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 20));
    detail::add_common(*mi, cfg);

    auto* re = app->add_subcommand("report", "Dimensionless bound products from sweep tables");
    re->add_option("--order", cfg.report.order, "sweep-order JSON table [path]");
    re->add_option("--coincidence", cfg.report.coincidence,
                   "sweep-coincidence JSON table [path]");
    detail::add_common(*re, cfg);

    for (auto* sub : app->get_subcommands({}))
    {
        sub->callback([&cfg, sub] { cfg.subcommand = sub->get_name(); });
    }
    return app;
}

/*!
 * Parse arguments (argv[0] is the program name). Throws CLI::Error on usage
 * problems, including requests for help.
 */
inline RunConfig parse_config(int argc, char const* const* argv)
{
    RunConfig cfg;
    auto app = make_app(cfg);
    app->parse(argc, argv);
    if (auto* opt = app->get_config_ptr(); opt && opt->count() > 0)
    {
        cfg.config_file = opt->as<std::string>();
    }
    return cfg;
}

namespace detail
{
inline std::string write_text(std::filesystem::path const& path,
                              std::function<void(std::ostream&)> const& body)
{
    std::ofstream os(path, std::ios::binary);
    if (os)
    {
        body(os);
    }
    if (!os)
    {
        throw io_error("cannot write '" + path.string() + "'");
    }
    return path.string();
}

inline void write_report_csv(std::ostream& os, nlohmann::ordered_json const& r)
{
    os << "# schema=qorder.report.v1\n";
    os << "quantity,value,within_bounds\n";
    auto const& order = r["order_of_arrival"];
    auto const& co = r["coincidence"];
    os << "order_delta_t_E_bar_at_p_fail_0.1,"
       << experiments::format_number(order["delta_t_E_bar_at_p_fail_0.1"].get<double>()) << ','
       << (order["within_bounds"].get<bool>() ? 1 : 0) << '\n';
    for (auto const& [thr, value] : order["threshold_sensitivity"].items())
    {
        os << "order_delta_t_E_bar_at_p_fail_" << thr << ','
           << experiments::format_number(value.get<double>()) << ",\n";
    }
    os << "coincidence_ka_star," << experiments::format_number(co["ka_star"].get<double>())
       << ",\n";
    os << "coincidence_delta_t_c_E_bar,"
       << experiments::format_number(co["delta_t_c_E_bar"].get<double>()) << ','
       << (co["within_bounds"].get<bool>() ? 1 : 0) << '\n';
}

//! Write tables/records and the manifest; returns the list of written paths.
inline std::vector<std::string> write_outputs(RunConfig const& cfg, CommandResult const& r)
{
    std::filesystem::path const dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
    {
        throw io_error("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
    }
    std::vector<std::string> written;
    auto const stem = cfg.stem();
    if (r.table)
    {
        if (cfg.wants("csv"))
        {
            written.push_back(write_text(dir / (stem + ".csv"),
                                         [&](std::ostream& os) { experiments::write_csv(os, *r.table); }));
        }
        if (cfg.wants("json"))
        {
            written.push_back(write_text(dir / (stem + ".json"),
                                         [&](std::ostream& os) { experiments::write_json(os, *r.table); }));
        }
    }
    if (r.record)
    {
        if (cfg.wants("csv"))
        {
            written.push_back(write_text(dir / (stem + ".csv"),
                                         [&](std::ostream& os) { write_report_csv(os, *r.record); }));
        }
        if (cfg.wants("json"))
        {
            written.push_back(write_text(dir / (stem + ".json"),
                                         [&](std::ostream& os) { os << r.record->dump(2) << '\n'; }));
        }
    }
    for (auto const& p : r.extra_outputs)
    {
        written.push_back(p);
    }
    return written;
}

inline void try_write_manifest(RunConfig const& cfg, experiments::Manifest const& m,
                               std::ostream& err)
{
    try
    {
        std::filesystem::create_directories(cfg.output_dir);
        experiments::write_manifest(
            (std::filesystem::path(cfg.output_dir) / (cfg.stem() + ".manifest.json")).string(), m);
    }
    catch (std::exception const& e)
    {
        err << "qorder: " << e.what() << '\n';
    }
}
}  // namespace detail

//! Full program: parse, run, write outputs and manifest. Returns the exit code.
inline int main_entry(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    auto app = make_app(cfg);
    try
    {
        app->parse(argc, argv);
    }
    catch (CLI::Error const& e)
    {
        int const code = app->exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }
    if (auto* opt = app->get_config_ptr(); opt && opt->count() > 0)
    {
        cfg.config_file = opt->as<std::string>();
    }

    auto const start = std::chrono::steady_clock::now();
    experiments::Manifest manifest;
    manifest.subcommand = cfg.subcommand;
    manifest.config = cfg.to_json();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    auto fail = [&](int code, std::string const& what, bool record) {
        err << "qorder " << cfg.subcommand << ": " << what << '\n';
        if (record)
        {
            manifest.partial = true;
            manifest.error = what;
            manifest.wall_time_s = elapsed();
            detail::try_write_manifest(cfg, manifest, err);
        }
        return code;
    };

    CommandResult result;
    try
    {
        result = run_command(cfg);
    }
    catch (usage_error const& e)
    {
        return fail(exit_usage, e.what(), false);
    }
    catch (report_incomplete const& e)
    {
        return fail(exit_usage, e.what(), false);
    }
    catch (io_error const& e)
    {
        return fail(exit_io, e.what(), true);
    }
    catch (std::filesystem::filesystem_error const& e)
    {
        return fail(exit_io, e.what(), true);
    }
    catch (numeric_error const& e)
    {
        return fail(exit_numeric, e.what(), true);
    }
    catch (std::invalid_argument const& e)
    {
        return fail(exit_usage, e.what(), false);
    }
    catch (std::domain_error const& e)
    {
        return fail(exit_usage, e.what(), false);
    }

    try
    {
        manifest.outputs = detail::write_outputs(cfg, result);
    }
    catch (io_error const& e)
    {
        return fail(exit_io, e.what(), true);
    }
    manifest.partial = !result.error.empty();
    manifest.error = result.error;
    manifest.wall_time_s = elapsed();
    detail::try_write_manifest(cfg, manifest, err);
    for (auto const& p : manifest.outputs)
    {
        out << p << '\n';
    }
    if (!result.error.empty())
    {
        err << "qorder " << cfg.subcommand << ": partial output: " << result.error << '\n';
        return exit_numeric;
    }
    return exit_ok;
}

}  // namespace qorder::cli
