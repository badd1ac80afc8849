#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qorder/dynamics/grid.hpp"

namespace qorder::dynamics
{

//! One-dimensional Gaussian packet: |psi|^2 has mean `center` and std `width`.
struct Packet
{
    double center = 0;
    double width = 1;
    double momentum = 0;
};

/*!
 * Two free particles on a line, each starting right of the origin and
 * moving left.
 */
struct TwoBodyConfig
{
    double m1 = 1;
    double m2 = 1;
    Packet x;
    Packet y;

    void validate() const
    {
        if (!(m1 > 0) || !(m2 > 0))
        {
            throw std::invalid_argument("TwoBodyConfig: masses must be positive");
        }
        for (Packet const* p : {&x, &y})
        {
            if (!(p->width > 0))
            {
                throw std::invalid_argument("TwoBodyConfig: packet widths must be positive");
            }
            if (!(p->center >= 5 * p->width))
            {
                throw std::invalid_argument(
                    "TwoBodyConfig: packets must start at least 5 widths right of the origin");
            }
            if (!(p->momentum < 0))
            {
                throw std::invalid_argument("TwoBodyConfig: mean momenta must be negative");
            }
        }
    }
};

//! Single particle of mass M in the plane, separable Gaussian.
struct PlaneConfig
{
    double M = 1;
    Packet x;
    Packet y;
    //! Factor multiplying the edge coupling after the rescaling.
    double coupling_scale = 1;

    double kinetic_energy() const
    {
        return (x.momentum * x.momentum + y.momentum * y.momentum) / (2 * M);
    }
};

inline double kinetic_energy(TwoBodyConfig const& c)
{
    return c.x.momentum * c.x.momentum / (2 * c.m1)
           + c.y.momentum * c.y.momentum / (2 * c.m2);
}

/*!
 * Canonical rescaling to one particle of mass M in 2D.
 *
 * Old momenta are sqrt(m_i/M) times the new ones and old coordinates
 * sqrt(M/m_i) times the new ones, so p^2/(2 m_i) -> p^2/(2M) and each
 * (x, p) pair keeps its phase-space area. A delta-function coupling in the
 * old x picks up the factor sqrt(m1/M).
 */
inline PlaneConfig map_two_body_to_plane(TwoBodyConfig const& c, double M)
{
    if (!(M > 0))
    {
        throw std::invalid_argument("map_two_body_to_plane: M must be positive");
    }
    if (!(c.m1 > 0) || !(c.m2 > 0))
    {
        throw std::invalid_argument("map_two_body_to_plane: masses must be positive");
    }
    auto map = [M](Packet p, double m) {
        double const s = std::sqrt(m / M);
        return Packet{p.center * s, p.width * s, p.momentum / s};
    };
    PlaneConfig out;
    out.M = M;
    out.x = map(c.x, c.m1);
    out.y = map(c.y, c.m2);
    out.coupling_scale = std::sqrt(c.m1 / M);
    return out;
}

/*!
 * Fill `g` with the separable Gaussian
 * psi = exp(-(x-x0)^2/(4 sx^2) + i px x) exp(-(y-y0)^2/(4 sy^2) + i py y),
 * normalized so that sum |psi|^2 hx hy = 1 on the grid.
 */
inline void fill_gaussian(GridState& g, Packet const& px, Packet const& py)
{
    if (!(px.width > 0) || !(py.width > 0))
    {
        throw std::invalid_argument("fill_gaussian: widths must be positive");
    }
    std::vector<Complex> fx(g.nx);
    std::vector<Complex> fy(g.ny);
    auto make = [](Packet const& p, double coord) {
        double const d = coord - p.center;
        return std::polar(std::exp(-d * d / (4 * p.width * p.width)), p.momentum * coord);
    };
    for (std::size_t i = 0; i < g.nx; ++i)
    {
        fx[i] = make(px, g.x(i));
    }
    for (std::size_t j = 0; j < g.ny; ++j)
    {
        fy[j] = make(py, g.y(j));
    }
    double s = 0;
    for (std::size_t j = 0; j < g.ny; ++j)
    {
        for (std::size_t i = 0; i < g.nx; ++i)
        {
            g.at(i, j) = fx[i] * fy[j];
            s += std::norm(g.at(i, j));
        }
    }
    double const scale = 1 / std::sqrt(s * g.cell_area());
    for (auto& v : g.field)
    {
        v *= scale;
    }
    g.time = 0;
}

//! Width of a free Gaussian after time t: sigma sqrt(1 + (t/(2 M sigma^2))^2).
inline double free_width(double sigma, double t, double M)
{
    double const r = t / (2 * M * sigma * sigma);
    return sigma * std::sqrt(1 + r * r);
}

}  // namespace qorder::dynamics
