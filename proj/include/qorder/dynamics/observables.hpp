#pragma once

#include <cmath>
#include <complex>

#include "qorder/dynamics/grid.hpp"
#include "qorder/dynamics/mask.hpp"

namespace qorder::dynamics
{

inline double norm(GridState const& g)
{
    double s = 0;
    for (auto const& v : g.field)
    {
        s += std::norm(v);
    }
    return s * g.cell_area();
}

struct Moments
{
    double mean_x = 0;
    double mean_y = 0;
    double width_x = 0;  //!< standard deviation of |psi|^2 along x
    double width_y = 0;
};

inline Moments moments(GridState const& g)
{
    double w = 0;
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double syy = 0;
    for (std::size_t j = 0; j < g.ny; ++j)
    {
        double const y = g.y(j);
        for (std::size_t i = 0; i < g.nx; ++i)
        {
            double const p = std::norm(g.at(i, j));
            double const x = g.x(i);
            w += p;
            sx += p * x;
            sy += p * y;
            sxx += p * x * x;
            syy += p * y * y;
        }
    }
    Moments m;
    m.mean_x = sx / w;
    m.mean_y = sy / w;
    m.width_x = std::sqrt(std::max(0.0, sxx / w - m.mean_x * m.mean_x));
    m.width_y = std::sqrt(std::max(0.0, syy / w - m.mean_y * m.mean_y));
    return m;
}

struct MomentumExpectation
{
    double px = 0;
    double py = 0;
};

//! <p> = sum Im(psi* d psi) h^2 with central differences (hbar = 1).
inline MomentumExpectation momentum(GridState const& g)
{
    MomentumExpectation out;
    auto val = [&](std::ptrdiff_t i, std::ptrdiff_t j) -> Complex {
        if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(g.nx)
            || j >= static_cast<std::ptrdiff_t>(g.ny))
        {
            return {};
        }
        return g.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(g.ny); ++j)
    {
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(g.nx); ++i)
        {
            Complex const c = std::conj(val(i, j));
            out.px += (c * (val(i + 1, j) - val(i - 1, j))).imag() / (2 * g.hx);
            out.py += (c * (val(i, j + 1) - val(i, j - 1))).imag() / (2 * g.hy);
        }
    }
    out.px *= g.cell_area();
    out.py *= g.cell_area();
    return out;
}

/*!
 * <H> for the discrete kinetic operator with Dirichlet nodes, matching what
 * the propagator evolves.
 */
inline double kinetic_energy(GridState const& g, double mass_x = 1, double mass_y = 1)
{
    double const bx = 1 / (2 * mass_x * g.hx * g.hx);
    double const by = 1 / (2 * mass_y * g.hy * g.hy);
    double e = 0;
    for (std::size_t j = 0; j < g.ny; ++j)
    {
        for (std::size_t i = 0; i < g.nx; ++i)
        {
            Complex const c = g.at(i, j);
            Complex const l = i > 0 ? g.at(i - 1, j) : Complex{};
            Complex const r = i + 1 < g.nx ? g.at(i + 1, j) : Complex{};
            Complex const d = j > 0 ? g.at(i, j - 1) : Complex{};
            Complex const u = j + 1 < g.ny ? g.at(i, j + 1) : Complex{};
            Complex const h = bx * (2.0 * c - l - r) + by * (2.0 * c - d - u);
            e += (std::conj(c) * h).real();
        }
    }
    return e * g.cell_area();
}

//! Probability on the outermost ring of nodes (domain-size diagnostic).
inline double boundary_probability(GridState const& g, std::size_t ring = 1)
{
    double s = 0;
    for (std::size_t j = 0; j < g.ny; ++j)
    {
        for (std::size_t i = 0; i < g.nx; ++i)
        {
            if (i < ring || j < ring || i + ring >= g.nx || j + ring >= g.ny)
            {
                s += std::norm(g.at(i, j));
            }
        }
    }
    return s * g.cell_area();
}

/*!
 * Probability in each open quadrant: I (x>0, y>0), II (x<0, y>0),
 * III (x<0, y<0), IV (x>0, y<0). Nodes on an axis give half their weight to
 * each neighbour quadrant; the origin a quarter to each.
 */
struct QuadrantProbabilities
{
    double p1 = 0;
    double p2 = 0;
    double p3 = 0;
    double p4 = 0;

    double sum() const { return p1 + p2 + p3 + p4; }
};

inline QuadrantProbabilities quadrant_probabilities(GridState const& g)
{
    double const tol = 1e-9 * std::min(g.hx, g.hy);
    QuadrantProbabilities q;
    for (std::size_t j = 0; j < g.ny; ++j)
    {
        double const y = g.y(j);
        double const wy_pos = y > tol ? 1.0 : (y < -tol ? 0.0 : 0.5);
        for (std::size_t i = 0; i < g.nx; ++i)
        {
            double const x = g.x(i);
            double const wx_pos = x > tol ? 1.0 : (x < -tol ? 0.0 : 0.5);
            double const p = std::norm(g.at(i, j));
            q.p1 += p * wx_pos * wy_pos;
            q.p2 += p * (1 - wx_pos) * wy_pos;
            q.p3 += p * (1 - wx_pos) * (1 - wy_pos);
            q.p4 += p * wx_pos * (1 - wy_pos);
        }
    }
    double const area = g.cell_area();
    q.p1 *= area;
    q.p2 *= area;
    q.p3 *= area;
    q.p4 *= area;
    return q;
}

/*!
 * Outcome of the order-of-arrival measurement with the knife edge.
 *
 * Quadrant III means x crossed first; quadrant IV means y did. Flux returned
 * to quadrant I or sent into II is a failed measurement; the quadrant-I part
 * is kept separately because the edge would otherwise count it as y-first.
 */
struct OrderOutcome
{
    double p_x_first = 0;
    double p_y_first = 0;
    double p_fail = 0;
    double p_reflected = 0;  //!< the quadrant-I share of p_fail
};

inline OrderOutcome classify_outcome(QuadrantProbabilities const& q)
{
    return {q.p3, q.p4, q.p1 + q.p2, q.p1};
}

}  // namespace qorder::dynamics
