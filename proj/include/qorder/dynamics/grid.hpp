#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qorder::dynamics
{

using Complex = std::complex<double>;

/*!
 * Complex field on a uniform Cartesian grid.
 *
 * Node (i, j) sits at (x0 + i hx, y0 + j hy) and is stored at j * nx + i.
 * Outside the grid the field is taken to be zero.
 */
struct GridState
{
    std::size_t nx = 0;
    std::size_t ny = 0;
    double hx = 1;
    double hy = 1;
    double x0 = 0;
    double y0 = 0;
    double time = 0;
    std::vector<Complex> field;

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * hx; }
    double y(std::size_t j) const { return y0 + static_cast<double>(j) * hy; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    Complex& at(std::size_t i, std::size_t j) { return field[index(i, j)]; }
    Complex const& at(std::size_t i, std::size_t j) const { return field[index(i, j)]; }
    double cell_area() const { return hx * hy; }
};

/*!
 * Zero field on [-half_x, half_x] x [-half_y, half_y] with an odd number of
 * nodes per axis, so both coordinate axes fall exactly on grid lines.
 */
inline GridState make_centered_grid(double half_x, double half_y, double hx, double hy)
{
    if (!(half_x > 0 && half_y > 0 && hx > 0 && hy > 0))
    {
        throw std::invalid_argument("make_centered_grid: extents and spacings must be positive");
    }
    GridState g;
    auto const cells_x = static_cast<std::size_t>(std::ceil(half_x / hx));
    auto const cells_y = static_cast<std::size_t>(std::ceil(half_y / hy));
    g.nx = 2 * cells_x + 1;
    g.ny = 2 * cells_y + 1;
    g.hx = hx;
    g.hy = hy;
    g.x0 = -static_cast<double>(cells_x) * hx;
    g.y0 = -static_cast<double>(cells_y) * hy;
    g.field.assign(g.nx * g.ny, Complex{0, 0});
    return g;
}

//! Index of the node column at x = 0, if the grid has one.
inline std::ptrdiff_t zero_column(GridState const& g)
{
    double const pos = -g.x0 / g.hx;
    double const idx = std::round(pos);
    if (std::abs(pos - idx) > 1e-9 || idx < 0 || idx >= static_cast<double>(g.nx))
    {
        return -1;
    }
    return static_cast<std::ptrdiff_t>(idx);
}

//! Index of the node row at y = 0, if the grid has one.
inline std::ptrdiff_t zero_row(GridState const& g)
{
    double const pos = -g.y0 / g.hy;
    double const idx = std::round(pos);
    if (std::abs(pos - idx) > 1e-9 || idx < 0 || idx >= static_cast<double>(g.ny))
    {
        return -1;
    }
    return static_cast<std::ptrdiff_t>(idx);
}

}  // namespace qorder::dynamics
