#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qorder/dynamics/grid.hpp"
#include "qorder/dynamics/mask.hpp"
#include "qorder/errors.hpp"
#include "qorder/parallel.hpp"

namespace qorder::dynamics
{

struct EvolveOptions
{
    double mass_x = 1;
    double mass_y = 1;
    unsigned workers = 1;  //!< 0 = all hardware threads
    //! Steps between finiteness checks (the last step is always checked).
    int check_interval = 64;
    //! Receives non-fatal warnings such as the dt accuracy bound.
    std::function<void(std::string const&)> on_warning;
};

//! Largest dt for which the scheme is considered accurate: min h^2 m / 2.
inline double accuracy_dt_bound(GridState const& g, EvolveOptions const& opt)
{
    return std::min(g.hx * g.hx * opt.mass_x, g.hy * g.hy * opt.mass_y) / 2;
}

namespace detail
{
inline Complex cmul(Complex a, Complex b)
{
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

/*!
 * Cayley factor (1 + i tau H/2)^{-1} (1 - i tau H/2) for the 1D operator
 * H = -beta (psi_{n+1} - 2 psi_n + psi_{n-1}) on segments with zero ends.
 *
 * The Thomas elimination coefficients depend only on the position within a
 * segment, so they are tabulated once.
 */
struct CayleyFactor
{
    Complex diag_lhs;
    Complex off_lhs;
    Complex diag_rhs;
    Complex off_rhs;
    std::vector<Complex> cprime;  //!< c'_p
    std::vector<Complex> inv;     //!< 1 / (d - o c'_{p-1})

    CayleyFactor(double beta, double tau, std::size_t max_len)
    {
        double const g = tau * beta;
        diag_lhs = {1, g};
        off_lhs = {0, -g / 2};
        diag_rhs = {1, -g};
        off_rhs = {0, g / 2};
        cprime.resize(max_len);
        inv.resize(max_len);
        Complex prev = 0;
        for (std::size_t p = 0; p < max_len; ++p)
        {
            Complex const denom = diag_lhs - off_lhs * prev;
            inv[p] = 1.0 / denom;
            cprime[p] = off_lhs * inv[p];
            prev = cprime[p];
        }
    }
};

//! Position of each node inside its run of open nodes along one axis; -1 if blocked.
inline std::vector<int> segment_positions(PotentialMask const& m, std::size_t nx,
                                          std::size_t ny, bool along_x)
{
    std::vector<int> pos(nx * ny, 0);
    auto blocked = [&](std::size_t i, std::size_t j) {
        return !m.blocked.empty() && m.blocked[j * nx + i] != 0;
    };
    if (along_x)
    {
        for (std::size_t j = 0; j < ny; ++j)
        {
            int run = 0;
            for (std::size_t i = 0; i < nx; ++i)
            {
                pos[j * nx + i] = blocked(i, j) ? -1 : run;
                run = blocked(i, j) ? 0 : run + 1;
            }
        }
    }
    else
    {
        for (std::size_t i = 0; i < nx; ++i)
        {
            int run = 0;
            for (std::size_t j = 0; j < ny; ++j)
            {
                pos[j * nx + i] = blocked(i, j) ? -1 : run;
                run = blocked(i, j) ? 0 : run + 1;
            }
        }
    }
    return pos;
}
}  // namespace detail

/*!
 * Alternating-direction Crank-Nicolson propagator for
 * H = p_x^2/(2 m_x) + p_y^2/(2 m_y) with hard Dirichlet nodes.
 *
 * One step is the Strang product X(dt/2) Y(dt) X(dt/2) of 1D Cayley factors,
 * each exactly unitary. Within a multi-step call the adjacent X half-steps
 * are kept separate so that evolving in chunks reproduces one long call.
 */
class Propagator
{
  public:
    Propagator(GridState const& g, PotentialMask mask, double dt, EvolveOptions opt = {})
        : nx_(g.nx)
        , ny_(g.ny)
        , dt_(dt)
        , mask_(std::move(mask))
        , opt_(std::move(opt))
        , half_x_(1 / (2 * opt_.mass_x * g.hx * g.hx), dt / 2, g.nx)
        , full_y_(1 / (2 * opt_.mass_y * g.hy * g.hy), dt, g.ny)
    {
        if (!(dt > 0) || !(opt_.mass_x > 0) || !(opt_.mass_y > 0))
        {
            throw std::invalid_argument("Propagator: dt and masses must be positive");
        }
        if (!mask_.blocked.empty() && (mask_.nx != nx_ || mask_.ny != ny_))
        {
            throw std::invalid_argument("Propagator: mask and grid sizes differ");
        }
        pos_x_ = detail::segment_positions(mask_, nx_, ny_, true);
        pos_y_ = detail::segment_positions(mask_, nx_, ny_, false);
        scratch_.resize(nx_ * ny_);
        if (dt >= accuracy_dt_bound(g, opt_) && opt_.on_warning)
        {
            opt_.on_warning("dt = " + std::to_string(dt)
                            + " exceeds the accuracy bound h^2 m / 2 = "
                            + std::to_string(accuracy_dt_bound(g, opt_)));
        }
    }

    double dt() const { return dt_; }
    PotentialMask const& mask() const { return mask_; }

    //! Advance `g` in place by `steps` steps; throws numeric_error on NaN/inf.
    void advance(GridState& g, long steps)
    {
        if (g.nx != nx_ || g.ny != ny_)
        {
            throw std::invalid_argument("Propagator: grid size changed");
        }
        apply_mask(g, mask_);
        for (long s = 0; s < steps; ++s)
        {
            sweep_x(g.field, half_x_);
            sweep_y(g.field, full_y_);
            sweep_x(g.field, half_x_);
            g.time += dt_;
            bool const check = (opt_.check_interval > 0 && (s + 1) % opt_.check_interval == 0)
                               || s + 1 == steps;
            if (check)
            {
                check_finite(g);
            }
        }
    }

  private:
    void check_finite(GridState const& g) const
    {
        for (auto const& v : g.field)
        {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            {
                throw numeric_error("evolve: non-finite field value at t = "
                                    + std::to_string(g.time));
            }
        }
    }

    void sweep_x(std::vector<Complex>& psi, detail::CayleyFactor const& f)
    {
        parallel_for(ny_, opt_.workers, [&](std::size_t j0, std::size_t j1) {
            for (std::size_t j = j0; j < j1; ++j)
            {
                Complex* row = psi.data() + j * nx_;
                Complex* g = scratch_.data() + j * nx_;
                int const* pos = pos_x_.data() + j * nx_;
                // Right-hand side, then forward elimination.
                for (std::size_t i = 0; i < nx_; ++i)
                {
                    if (pos[i] < 0)
                    {
                        g[i] = 0;
                        continue;
                    }
                    Complex const left = i > 0 ? row[i - 1] : Complex{};
                    Complex const right = i + 1 < nx_ ? row[i + 1] : Complex{};
                    Complex r = detail::cmul(f.diag_rhs, row[i])
                                + detail::cmul(f.off_rhs, left + right);
                    auto const p = static_cast<std::size_t>(pos[i]);
                    if (p > 0)
                    {
                        r -= detail::cmul(f.off_lhs, g[i - 1]);
                    }
                    g[i] = detail::cmul(r, f.inv[p]);
                }
                // Back substitution.
                for (std::size_t i = nx_; i-- > 0;)
                {
                    if (pos[i] < 0)
                    {
                        row[i] = 0;
                        continue;
                    }
                    bool const linked = i + 1 < nx_ && pos[i + 1] > 0;
                    row[i] = linked
                                 ? g[i]
                                       - detail::cmul(
                                           f.cprime[static_cast<std::size_t>(pos[i])],
                                           row[i + 1])
                                 : g[i];
                }
            }
        });
    }

    // Columns are processed in blocks, iterating rows outermost so memory
    // access stays contiguous.
    void sweep_y(std::vector<Complex>& psi, detail::CayleyFactor const& f)
    {
        parallel_for(nx_, opt_.workers, [&](std::size_t i0, std::size_t i1) {
            // Right-hand side needs the old column values; build it fully first.
            for (std::size_t j = 0; j < ny_; ++j)
            {
                Complex const* up = j + 1 < ny_ ? psi.data() + (j + 1) * nx_ : nullptr;
                Complex const* down = j > 0 ? psi.data() + (j - 1) * nx_ : nullptr;
                Complex const* mid = psi.data() + j * nx_;
                Complex* g = scratch_.data() + j * nx_;
                int const* pos = pos_y_.data() + j * nx_;
                for (std::size_t i = i0; i < i1; ++i)
                {
                    if (pos[i] < 0)
                    {
                        g[i] = 0;
                        continue;
                    }
                    Complex const nb = (up ? up[i] : Complex{}) + (down ? down[i] : Complex{});
                    g[i] = detail::cmul(f.diag_rhs, mid[i]) + detail::cmul(f.off_rhs, nb);
                }
            }
            for (std::size_t j = 0; j < ny_; ++j)
            {
                Complex* g = scratch_.data() + j * nx_;
                Complex const* gprev = j > 0 ? scratch_.data() + (j - 1) * nx_ : nullptr;
                int const* pos = pos_y_.data() + j * nx_;
                for (std::size_t i = i0; i < i1; ++i)
                {
                    if (pos[i] < 0)
                    {
                        continue;
                    }
                    auto const p = static_cast<std::size_t>(pos[i]);
                    Complex r = g[i];
                    if (p > 0)
                    {
                        r -= detail::cmul(f.off_lhs, gprev[i]);
                    }
                    g[i] = detail::cmul(r, f.inv[p]);
                }
            }
            for (std::size_t j = ny_; j-- > 0;)
            {
                Complex* out = psi.data() + j * nx_;
                Complex const* below = j + 1 < ny_ ? psi.data() + (j + 1) * nx_ : nullptr;
                Complex const* g = scratch_.data() + j * nx_;
                int const* pos = pos_y_.data() + j * nx_;
                int const* pos_next = j + 1 < ny_ ? pos_y_.data() + (j + 1) * nx_ : nullptr;
                for (std::size_t i = i0; i < i1; ++i)
                {
                    if (pos[i] < 0)
                    {
                        out[i] = 0;
                        continue;
                    }
                    bool const linked = pos_next && pos_next[i] > 0;
                    out[i] = linked
                                 ? g[i]
                                       - detail::cmul(
                                           f.cprime[static_cast<std::size_t>(pos[i])],
                                           below[i])
                                 : g[i];
                }
            }
        });
    }

    std::size_t nx_;
    std::size_t ny_;
    double dt_;
    PotentialMask mask_;
    EvolveOptions opt_;
    detail::CayleyFactor half_x_;
    detail::CayleyFactor full_y_;
    std::vector<int> pos_x_;
    std::vector<int> pos_y_;
    std::vector<Complex> scratch_;
};

/*!
 * Evolve `state` for `steps` steps of size dt under the hard mask.
 *
 * Blocked nodes are zeroed first. The returned state has time advanced by
 * steps * dt.
 */
inline GridState evolve(GridState state, PotentialMask const& mask, double dt, long steps,
                        EvolveOptions const& opt = {})
{
    if (steps < 0)
    {
        throw std::invalid_argument("evolve: steps must be nonnegative");
    }
    Propagator prop(state, mask, dt, opt);
    prop.advance(state, steps);
    return state;
}

}  // namespace qorder::dynamics
