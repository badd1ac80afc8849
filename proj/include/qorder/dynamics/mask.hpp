#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qorder/dynamics/grid.hpp"

namespace qorder::dynamics
{

/*!
 * Hard (infinite) potentials realized as Dirichlet nodes.
 *
 * - edge: the x = 0 column for y < 0 (the knife edge)
 * - wall: the entire x = 0 column
 * - disk: every node with r <= a about (cx, cy)
 * - strip: nodes on x + y = 0 (about the center) with |x - y|/sqrt2 <= a,
 *   a one-node-thick segment of length 2a at 45 degrees; a diagonal chain
 *   of nodes is impassable for the 5-point stencil
 */
enum class MaskKind
{
    none,
    edge,
    wall,
    disk,
    strip
};

inline char const* to_string(MaskKind kind)
{
    switch (kind)
    {
        case MaskKind::none: return "none";
        case MaskKind::edge: return "edge";
        case MaskKind::wall: return "wall";
        case MaskKind::disk: return "disk";
        case MaskKind::strip: return "strip";
    }
    return "unknown";
}

inline MaskKind mask_kind_from_string(std::string const& name)
{
    for (auto k : {MaskKind::none, MaskKind::edge, MaskKind::wall, MaskKind::disk,
                   MaskKind::strip})
    {
        if (name == to_string(k))
        {
            return k;
        }
    }
    throw std::invalid_argument("unknown mask kind '" + name + "'");
}

struct PotentialMask
{
    MaskKind kind = MaskKind::none;
    double a = 0;
    double cx = 0;
    double cy = 0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<std::uint8_t> blocked;  //!< 1 where psi is pinned to zero

    bool is_blocked(std::size_t i, std::size_t j) const
    {
        return !blocked.empty() && blocked[j * nx + i] != 0;
    }
    std::size_t count() const
    {
        std::size_t n = 0;
        for (auto b : blocked)
        {
            n += b;
        }
        return n;
    }
};

namespace detail
{
inline PotentialMask empty_mask(GridState const& g, MaskKind kind)
{
    PotentialMask m;
    m.kind = kind;
    m.nx = g.nx;
    m.ny = g.ny;
    m.blocked.assign(g.nx * g.ny, 0);
    return m;
}

inline std::size_t require_zero_column(GridState const& g)
{
    auto const col = zero_column(g);
    if (col < 0)
    {
        throw std::invalid_argument("mask: grid has no node column at x = 0");
    }
    return static_cast<std::size_t>(col);
}
}  // namespace detail

inline PotentialMask make_mask(GridState const& g, MaskKind kind, double a = 0,
                               double cx = 0, double cy = 0)
{
    auto m = detail::empty_mask(g, kind);
    m.a = a;
    m.cx = cx;
    m.cy = cy;
    double const tol = 1e-9 * std::min(g.hx, g.hy);
    switch (kind)
    {
        case MaskKind::none: break;
        case MaskKind::edge:
        case MaskKind::wall: {
            auto const col = detail::require_zero_column(g);
            for (std::size_t j = 0; j < g.ny; ++j)
            {
                if (kind == MaskKind::wall || g.y(j) < -tol)
                {
                    m.blocked[g.index(col, j)] = 1;
                }
            }
            break;
        }
        case MaskKind::disk:
            if (!(a > 0))
            {
                throw std::invalid_argument("disk mask: radius must be positive");
            }
            for (std::size_t j = 0; j < g.ny; ++j)
            {
                for (std::size_t i = 0; i < g.nx; ++i)
                {
                    if (std::hypot(g.x(i) - cx, g.y(j) - cy) <= a + tol)
                    {
                        m.blocked[g.index(i, j)] = 1;
                    }
                }
            }
            break;
        case MaskKind::strip:
            if (!(a > 0))
            {
                throw std::invalid_argument("strip mask: half-length must be positive");
            }
            if (std::abs(g.hx - g.hy) > tol)
            {
                throw std::invalid_argument("strip mask: needs equal spacings");
            }
            for (std::size_t j = 0; j < g.ny; ++j)
            {
                for (std::size_t i = 0; i < g.nx; ++i)
                {
                    double const u = g.x(i) - cx;
                    double const v = g.y(j) - cy;
                    if (std::abs(u + v) <= 0.5 * g.hx
                        && std::abs(u - v) / std::sqrt(2.0) <= a + tol)
                    {
                        m.blocked[g.index(i, j)] = 1;
                    }
                }
            }
            break;
    }
    return m;
}

//! Zero the field on every blocked node.
inline void apply_mask(GridState& g, PotentialMask const& m)
{
    if (m.blocked.empty())
    {
        return;
    }
    if (m.nx != g.nx || m.ny != g.ny)
    {
        throw std::invalid_argument("apply_mask: mask and grid sizes differ");
    }
    for (std::size_t n = 0; n < g.field.size(); ++n)
    {
        if (m.blocked[n])
        {
            g.field[n] = 0;
        }
    }
}

}  // namespace qorder::dynamics
