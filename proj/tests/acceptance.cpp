// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: acceptance [criterion ids...]   (default: all)
//
// Exit status is 0 when every criterion passes except those listed in
// `known_unattainable`, which must fail (a surprise pass is also an error).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qorder/qorder.hpp"

using namespace qorder;
using std::numbers::pi;

namespace
{

struct Outcome
{
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, std::string const& what)
    {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void info(std::string const& what) { notes.push_back("     " + what); }
};

std::string fmt(char const* pattern, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(char const* pattern, ...)
{
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

struct Criterion
{
    int id;
    char const* title;
    std::function<Outcome()> run;
};

// The large-ka phase-shift form is pi/2 away from the continuous branch of
// tan(delta) = -J/N. See README "Known deviations" for both entries.
// Criterion 4: the default cone at kr = 1e4 is 0.05 rad, where the
// leading-order diffracted term is still 4% off the exact field.
std::set<int> const known_unattainable{2, 4};

// Shared between criteria 7, 8 and the closing bound report.
std::optional<experiments::Table> order_table;
std::optional<experiments::Table> coincidence_table;

//---------------------------------------------------------------------------//
Outcome shift_ratio_curve()
{
    Outcome o;
    double const low = disk::shift_ratio(1e-3);
    o.check(low < 0.1, fmt("ratio(1e-3) = %.4g < 0.1", low));
    double running_max = 0;
    double worst_dip = 0;
    for (auto ka : experiments::log_space(0.1, 100, 400))
    {
        double const r = disk::shift_ratio(ka);
        worst_dip = std::max(worst_dip, running_max - r);
        running_max = std::max(running_max, r);
    }
    o.check(worst_dip <= 0.01,
            fmt("monotone on [0.1, 100]: largest dip %.3g <= 0.01 (400 log points)", worst_dip));
    double const high = disk::shift_ratio(100);
    o.check(high >= 0.98 && high <= 1.02, fmt("ratio(100) = %.5f in [0.98, 1.02]", high));
    return o;
}

Outcome phase_shift_regimes()
{
    Outcome o;
    double const d0 = disk::phase_shift(0, 100).delta;
    double const target = 100 - pi / 4;
    double const off = disk::distance_mod_pi(d0, target);
    o.check(off < 0.02, fmt("|delta_0(100) - (100 - pi/4)| mod pi = %.4f < 0.02 "
                            "(delta_0(100) = %.6f)",
                            off, d0));
    o.info(fmt("branch offset from ka - (pi/2)(m - 1/2): %.2e",
               disk::distance_mod_pi(d0, 100 + pi / 4)));
    double const d1 = disk::phase_shift(1, 0.01).delta;
    double const small = pi * 0.005 * 0.005;
    double const rel = std::abs(d1 - small) / small;
    o.check(rel < 0.02, fmt("delta_1(0.01) vs pi (0.005)^2: rel. error %.2e < 0.02", rel));
    double const t0 = std::tan(disk::phase_shift(0, 1e-3).delta);
    double const expect = -pi / (2 * std::log(1e-3));
    double const rel0 = std::abs(t0 - expect) / expect;
    o.check(rel0 < 0.05, fmt("tan delta_0(1e-3) vs -pi/(2 ln ka): rel. error %.3f < 0.05", rel0));
    return o;
}

Outcome small_ka_isotropy()
{
    Outcome o;
    double const k = 1;
    double const ka = 1e-3;
    disk::PartialWaveSum const pw(k, ka / k);
    auto const profile = disk::cross_section_profile(pw, 360);
    auto const [lo, hi] = std::minmax_element(profile.values.begin(), profile.values.end());
    o.check(*hi / *lo < 1.05, fmt("max/min sigma(theta) = %.6f < 1.05", *hi / *lo));
    double const ln = std::log(ka);
    double const expect = pi / (2 * k * ln * ln);
    double worst = 0;
    for (double v : profile.values)
    {
        worst = std::max(worst, std::abs(v - expect) / expect);
    }
    o.check(worst < 0.1, fmt("sigma vs pi/(2k ln^2 ka) = %.5f: worst rel. error %.3f < 0.1",
                             expect, worst));
    return o;
}

Outcome halfplane_exact()
{
    using halfplane::HalfPlaneConfig;
    using halfplane::asymptotic_field;
    using halfplane::exact_field;
    Outcome o;
    double worst_screen = 0;
    for (double theta0 : {0.1, pi / 4, 1.4})
    {
        HalfPlaneConfig const cfg{1.0, theta0};
        for (auto kr : experiments::log_space(0.1, 1e4, 81))
        {
            worst_screen = std::max(worst_screen, std::abs(exact_field(kr, -pi / 2, cfg)));
            worst_screen = std::max(worst_screen, std::abs(exact_field(kr, 1.5 * pi, cfg)));
        }
    }
    o.check(worst_screen < 1e-8,
            fmt("|psi| on the screen, kr in [0.1, 1e4]: max %.2e < 1e-8", worst_screen));

    auto field_xy = [](double x, double y, HalfPlaneConfig const& cfg) {
        return exact_field(std::hypot(x, y), std::atan2(y, x), cfg);
    };
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> radius(0.5, 60.0);
    std::uniform_real_distribution<double> angle(-pi / 2 + 0.1, 1.5 * pi - 0.1);
    double worst_res = 0;
    for (double k : {0.5, 1.0, 4.0})
    {
        HalfPlaneConfig const cfg{k, 0.6};
        double const h = 1e-3 / k;
        for (int i = 0; i < 100; ++i)
        {
            double const r = radius(rng) / k;
            double const t = angle(rng);
            double const x = r * std::cos(t);
            double const y = r * std::sin(t);
            auto const c = field_xy(x, y, cfg);
            auto const lap = (field_xy(x + h, y, cfg) + field_xy(x - h, y, cfg)
                              + field_xy(x, y + h, cfg) + field_xy(x, y - h, cfg) - 4.0 * c)
                             / (h * h);
            worst_res = std::max(worst_res, std::abs(lap + k * k * c) / (k * k * std::abs(c)));
        }
    }
    o.check(worst_res < 1e-4,
            fmt("5-point Helmholtz residual (300 random points): max %.2e < 1e-4", worst_res));

    // Every angle outside the default field-comparison cone, plus two
    // reference figures: angles at least twice the cone away, and the sector
    // midpoints.
    double worst_asym = 0;
    double worst_far = 0;
    double worst_mid = 0;
    int samples = 0;
    double const r = 1e4;
    double const cone = halfplane::boundary_cone_halfwidth(r);
    for (double theta0 : {0.3, pi / 4, 1.2})
    {
        HalfPlaneConfig const cfg{1.0, theta0};
        auto rel_error = [&](double t) {
            auto const exact = exact_field(r, t, cfg);
            return std::abs(asymptotic_field(r, t, cfg).value() - exact) / std::abs(exact);
        };
        for (int i = 1; i < 2000; ++i)
        {
            double const t = -pi / 2 + 2 * pi * i / 2000.0;
            double const d = halfplane::boundary_distance(t, cfg);
            if (d < cone)
            {
                continue;
            }
            double const e = rel_error(t);
            worst_asym = std::max(worst_asym, e);
            if (d >= 2 * cone)
            {
                worst_far = std::max(worst_far, e);
            }
            ++samples;
        }
        // Sector midpoints: illuminated, reflection, shadow.
        for (double t : {(-pi / 2 - theta0) / 2, pi / 2, (pi + theta0 + 1.5 * pi) / 2})
        {
            worst_mid = std::max(worst_mid, rel_error(t));
        }
    }
    o.check(worst_asym < 0.01,
            fmt("asymptotic vs exact at kr = 1e4, %d angles outside the %.3f rad boundary cones: "
                "max rel. error %.2e < 0.01",
                samples, cone, worst_asym));
    o.info(fmt("at least %.2f rad from a boundary: max rel. error %.2e", 2 * cone, worst_far));
    o.info(fmt("sector midpoints: max rel. error %.2e", worst_mid));
    o.info("leading-order error near a boundary is 1/(kr d^2); 1% needs d of about 0.11 rad at kr = 1e4");
    return o;
}

Outcome sigma_f_scaling()
{
    using halfplane::failure_cross_section;
    Outcome o;
    std::vector<double> lx;
    std::vector<double> ly;
    for (double k : {1.0, 2.0, 4.0, 8.0})
    {
        auto const f = failure_cross_section({k, pi / 4}, 0.1);
        lx.push_back(std::log(k));
        ly.push_back(std::log(f.sigma_f));
        o.info(fmt("k = %g: sigma_f = %.6f, closed form 1/(k cos(theta0/2)) = %.6f", k,
                   f.sigma_f, f.closed_form));
    }
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        mx += lx[i] / 4;
        my += ly[i] / 4;
    }
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    double const slope = sxy / sxx;
    o.check(std::abs(slope + 1) <= 0.05, fmt("log-log slope %.6f = -1.00 +- 0.05", slope));
    return o;
}

//---------------------------------------------------------------------------//
dynamics::Complex free_packet(double x, double t, dynamics::Packet const& p, double M)
{
    dynamics::Complex const alpha{1, t / (2 * M * p.width * p.width)};
    double const d = x - p.center - p.momentum * t / M;
    return std::exp(-d * d / (4 * p.width * p.width * alpha)
                    + dynamics::Complex{0, p.momentum * x - p.momentum * p.momentum * t / (2 * M)})
           / std::sqrt(alpha);
}

Outcome dynamics_oracles()
{
    using namespace dynamics;
    Outcome o;
    {
        // 1025^2 nodes.
        Packet const px{0.0, 1.0, 0.5};
        Packet const py{0.0, 1.0, 0.0};
        double const half = 14.0;
        auto g = make_centered_grid(half, half, half / 512, half / 512);
        fill_gaussian(g, px, py);
        double const t = 2.0;  // = 2 M width^2
        auto const out = evolve(g, make_mask(g, MaskKind::none), 0.004, 500);
        auto const m = moments(out);
        double const expected = free_width(1.0, t, 1.0);
        double const err = std::max(std::abs(m.width_x / expected - 1),
                                     std::abs(m.width_y / expected - 1));
        o.check(err < 0.01, fmt("free dispersion on %zux%zu grid: width rel. error %.2e < 0.01",
                                g.nx, g.ny, err));
    }
    {
        Packet const px{6.0, 1.0, -4.0};
        Packet const py{0.0, 1.0, 0.0};
        auto g = make_centered_grid(14.0, 14.0, 0.08, 0.08);
        fill_gaussian(g, px, py);
        auto const out = evolve(g, make_mask(g, MaskKind::wall), 0.003, 1000);
        double w = 0;
        double p = 0;
        std::vector<Complex> oracle(out.nx);
        for (std::size_t i = 0; i < out.nx; ++i)
        {
            double const x = out.x(i);
            oracle[i] = x > 1e-12 ? free_packet(x, out.time, px, 1) - free_packet(-x, out.time, px, 1)
                                  : Complex{};
        }
        for (std::size_t i = 0; i < out.nx; ++i)
        {
            Complex const l = i > 0 ? oracle[i - 1] : Complex{};
            Complex const r = i + 1 < out.nx ? oracle[i + 1] : Complex{};
            w += std::norm(oracle[i]);
            p += (std::conj(oracle[i]) * (r - l)).imag() / (2 * out.hx);
        }
        double const after = momentum(out).px / norm(out);
        double const err = std::abs(after / (p / w) - 1);
        o.check(err < 0.02, fmt("wall bounce: <p_x> %.4f vs mirror-image %.4f, rel. error %.2e < 0.02",
                                after, p / w, err));
    }
    {
        Packet const px{6.0, 1.5, -2.0};
        Packet const py{0.5, 1.5, 0.0};
        auto g = make_centered_grid(10.0, 10.0, 0.25, 0.25);
        fill_gaussian(g, px, py);
        auto const disk = make_mask(g, MaskKind::disk, 2.0);
        apply_mask(g, disk);
        double const n0 = norm(g);
        auto const out = evolve(g, disk, 0.02, 10000);
        double const drift = std::abs(norm(out) - n0);
        o.check(drift < 1e-4, fmt("norm drift over 1e4 steps with a disk: %.2e < 1e-4", drift));
    }
    {
        Packet const p{8.0, 1.5, -3.0};
        auto g = make_centered_grid(19.0, 19.0, 0.15, 0.15);
        fill_gaussian(g, p, p);
        auto const q = quadrant_probabilities(evolve(g, make_mask(g, MaskKind::none), 0.01, 533));
        o.check(std::abs(q.sum() - 1) < 1e-6 && q.p3 > 0.95,
                fmt("free diagonal packet: quadrant sum %.9f = 1 +- 1e-6, P_III = %.4f > 0.95",
                    q.sum(), q.p3));
    }
    {
        TwoBodyConfig const c{4.0, 1.0, {5.0, 1.0, -6.0}, {8.0, 1.6, -3.0}};
        auto const mapped = map_two_body_to_plane(c, 1.0);
        double const sx = std::sqrt(c.m1);
        auto a_grid = make_centered_grid(9.0, 16.0, 0.075, 0.15);
        fill_gaussian(a_grid, c.x, c.y);
        EvolveOptions two_body;
        two_body.mass_x = c.m1;
        two_body.mass_y = c.m2;
        auto const a = evolve(a_grid, make_mask(a_grid, MaskKind::edge), 0.008, 600, two_body);
        auto b_grid = make_centered_grid(9.0 * sx, 16.0, 0.075 * sx, 0.15);
        fill_gaussian(b_grid, mapped.x, mapped.y);
        auto const b = evolve(b_grid, make_mask(b_grid, MaskKind::edge), 0.008, 600);
        auto const qa = quadrant_probabilities(a);
        auto const qb = quadrant_probabilities(b);
        double const diff = std::max({std::abs(qa.p1 - qb.p1), std::abs(qa.p2 - qb.p2),
                                      std::abs(qa.p3 - qb.p3), std::abs(qa.p4 - qb.p4)});
        o.check(diff < 1e-10, fmt("two-body (m1 = 4, m2 = 1) vs mapped plane: max quadrant "
                                  "difference %.2e < 1e-10",
                                  diff));
        o.check(std::abs(qa.sum() - 1) < 1e-6,
                fmt("quadrant sum after the edge run: |sum - 1| = %.2e < 1e-6", std::abs(qa.sum() - 1)));
    }
    return o;
}

//---------------------------------------------------------------------------//
Outcome order_of_arrival()
{
    Outcome o;
    experiments::SweepSpec spec;
    spec.values = {3, 6, 12};
    spec.convergence_check = true;
    auto t = experiments::order_failure_sweep(spec);
    auto const p = t.column("p_fail");
    auto const pkw = t.column("p_fail_k_w");
    auto const analytic = t.column("p_fail_analytic");
    bool positive = true;
    bool decreasing = true;
    bool clean = true;
    double ratio_lo = 1e300;
    double ratio_hi = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        positive = positive && p[i] > 0;
        decreasing = decreasing && (i == 0 || p[i] < p[i - 1]);
        clean = clean && !t.rows[i].diag.flagged();
        ratio_lo = std::min(ratio_lo, p[i] / analytic[i]);
        ratio_hi = std::max(ratio_hi, p[i] / analytic[i]);
        o.info(fmt("k = %g: p_fail = %.5f, p_fail k w = %.4f, analytic %.5f, norm drift %.1e, "
                   "boundary %.1e, steps %g",
                   spec.values[i], p[i], pkw[i], analytic[i], t.rows[i].diag.norm_drift,
                   t.rows[i].diag.boundary_probability, t.column("steps")[i]));
    }
    double const mean = (pkw[0] + pkw[1] + pkw[2]) / 3;
    double spread = 0;
    for (double v : pkw)
    {
        spread = std::max(spread, std::abs(v / mean - 1));
    }
    o.check(positive, "p_fail > 0 at every k");
    o.check(decreasing, "p_fail decreasing in k");
    o.check(spread <= 0.3,
            fmt("p_fail k w within +-30%% of its mean over k in {3, 6, 12}: max deviation %.3f",
                spread));
    o.check(clean, "no row flagged by solver diagnostics");
    double const conv = t.summary_value("convergence_rel_change");
    o.check(conv < 0.1, fmt("halving h at k = 3 changes p_fail by %.3f < 0.1", conv));
    o.check(ratio_lo > 0.5 && ratio_hi < 2,
            fmt("grid vs diffraction estimate within a factor 2: ratios in [%.3f, %.3f]", ratio_lo,
                ratio_hi));

    auto const fit = experiments::fit_failure_threshold(t, spec.order);
    experiments::record_threshold_fit(t, fit);
    o.info(fmt("fit p_fail = %.4f k^%.4f", fit.amplitude, fit.exponent));
    double product = 0;
    for (std::size_t i = 0; i < fit.thresholds.size(); ++i)
    {
        o.info(fmt("threshold p_fail = %g: k = %.4f, delta_t E_bar = %.4f", fit.thresholds[i],
                   fit.k_at[i], fit.product_at[i]));
        if (fit.thresholds[i] == 0.1)
        {
            product = fit.product_at[i];
        }
    }
    o.check(product >= 0.1 && product <= 10,
            fmt("delta_t E_bar at p_fail = 0.1 is %.4f, in [0.1, 10]", product));
    order_table = std::move(t);
    return o;
}

Outcome coincidence_bound()
{
    Outcome o;
    auto t = experiments::coincidence_sweep(experiments::log_space(1e-3, 50, 60), 1.0);
    double const ka_star = t.summary_value("ka_star");
    double const product = t.summary_value("ka_star_delta_t_E_bar");
    o.check(ka_star >= 1 && ka_star <= 30, fmt("crossover ka* = %.4f in [1, 30]", ka_star));
    o.check(std::abs(product - ka_star / 2) < 1e-12 && product >= 0.5 && product <= 15,
            fmt("delta_t_c E_bar = ka*/2 = %.4f, in [0.5, 15]", product));
    coincidence_table = std::move(t);
    return o;
}

Outcome microscope_bound()
{
    Outcome o;
    double const k = 1;
    double const a = 1;
    double const lambda = 2 * pi / k;
    double const zero = experiments::microscope_distinguishability(0, k, a);
    double const small = experiments::microscope_distinguishability(0.05 * lambda, k, a);
    double const tenth = experiments::microscope_distinguishability(0.1 * lambda, k, a);
    double const full = experiments::microscope_distinguishability(lambda, k, a);
    o.check(zero == 0.0, fmt("distinguishability(0) = %g exactly 0", zero));
    o.check(small < 0.1, fmt("distinguishability(0.05 wavelength) = %.4f < 0.1", small));
    o.check(full > tenth, fmt("distinguishability(1 wavelength) = %.4f > (0.1 wavelength) = %.4f",
                              full, tenth));
    return o;
}

Outcome determinism()
{
    Outcome o;
    auto csv = [](experiments::Table const& t) {
        std::ostringstream os;
        experiments::write_csv(os, t);
        experiments::write_json(os, t);
        return os.str();
    };
    auto const kas = experiments::log_space(1e-3, 50, 40);
    o.check(csv(experiments::coincidence_sweep(kas, 1.0, 1.0, 1))
                == csv(experiments::coincidence_sweep(kas, 1.0, 1.0, 3)),
            "coincidence tables byte-identical across runs and worker counts");

    experiments::SweepSpec spec;
    spec.values = {3, 4};
    spec.order.points_per_wavelength = 6;
    spec.order.workers = 1;
    auto const first = csv(experiments::order_failure_sweep(spec));
    spec.order.workers = 2;
    o.check(first == csv(experiments::order_failure_sweep(spec)),
            "order-of-arrival tables byte-identical across runs and worker counts");

    using namespace dynamics;
    auto g = make_centered_grid(6.0, 6.0, 0.2, 0.2);
    fill_gaussian(g, {3.0, 1.0, -2.0}, {3.0, 1.0, -2.0});
    g = evolve(g, make_mask(g, MaskKind::edge), 0.01, 37);
    std::stringstream buffer;
    write_checkpoint(buffer, g);
    auto const back = read_checkpoint(buffer);
    bool const same = back.nx == g.nx && back.ny == g.ny
                      && std::memcmp(&back.hx, &g.hx, sizeof(double)) == 0
                      && std::memcmp(&back.hy, &g.hy, sizeof(double)) == 0
                      && std::memcmp(&back.x0, &g.x0, sizeof(double)) == 0
                      && std::memcmp(&back.y0, &g.y0, sizeof(double)) == 0
                      && std::memcmp(&back.time, &g.time, sizeof(double)) == 0
                      && std::memcmp(back.field.data(), g.field.data(),
                                     g.field.size() * sizeof(Complex))
                             == 0;
    o.check(same, "GridState checkpoint round-trips bit-exactly");
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    std::vector<Criterion> const criteria{
        {1, "delta_1/delta_0 curve shape", shift_ratio_curve},
        {2, "phase-shift regime checks", phase_shift_regimes},
        {3, "small-ka isotropy and magnitude", small_ka_isotropy},
        {4, "half-plane exact solution", halfplane_exact},
        {5, "sigma_f scaling in k", sigma_f_scaling},
        {6, "dynamics oracle suite", dynamics_oracles},
        {7, "order-of-arrival bound", order_of_arrival},
        {8, "coincidence bound", coincidence_bound},
        {9, "microscope bound", microscope_bound},
        {10, "determinism and checkpoint round-trip", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
    {
        selected.insert(std::atoi(argv[i]));
    }

    std::vector<int> failed;
    std::vector<int> unexpected;
    for (auto const& c : criteria)
    {
        if (!selected.empty() && !selected.count(c.id))
        {
            continue;
        }
        auto const start = std::chrono::steady_clock::now();
        Outcome out;
        try
        {
            out = c.run();
        }
        catch (std::exception const& e)
        {
            out.check(false, std::string("exception: ") + e.what());
        }
        double const secs
            = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool const known = known_unattainable.count(c.id) > 0;
        std::printf("%s %2d  %s  (%.1f s)%s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                    !out.pass && known ? "  [known unattainable]" : "");
        for (auto const& n : out.notes)
        {
            std::printf("        %s\n", n.c_str());
        }
        std::fflush(stdout);
        if (!out.pass)
        {
            failed.push_back(c.id);
        }
        if (out.pass == known)
        {
            unexpected.push_back(c.id);
        }
    }

    if (order_table && coincidence_table)
    {
        auto const r = experiments::bound_report(&*order_table, &*coincidence_table);
        std::printf("bound report: %s\n", experiments::to_json(r).dump().c_str());
    }

    std::printf("summary: %zu failing", failed.size());
    for (int id : failed)
    {
        std::printf(" %d", id);
    }
    std::printf("; known unattainable:");
    for (int id : known_unattainable)
    {
        std::printf(" %d", id);
    }
    std::printf("\n");
    if (!unexpected.empty())
    {
        std::printf("unexpected outcome for criteria:");
        for (int id : unexpected)
        {
            std::printf(" %d", id);
        }
        std::printf("\n");
        return 1;
    }
    return 0;
}
