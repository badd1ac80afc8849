#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qorder/dynamics/grid.hpp"

namespace qorder::dynamics
{

/*!
 * Binary GridState dump: 8-byte magic "QORDGRID", uint32 version, uint64
 * nx and ny, doubles hx hy x0 y0 time, then nx*ny (re, im) pairs. All
 * values are in host byte order; doubles are copied bit for bit.
 */
inline constexpr std::array<char, 8> checkpoint_magic{'Q', 'O', 'R', 'D', 'G', 'R', 'I', 'D'};
inline constexpr std::uint32_t checkpoint_version = 1;

namespace detail
{
template<class T>
void write_raw(std::ostream& os, T const& v)
{
    os.write(reinterpret_cast<char const*>(&v), sizeof(T));
}

template<class T>
T read_raw(std::istream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is)
    {
        throw std::runtime_error("checkpoint: truncated stream");
    }
    return v;
}
}  // namespace detail

inline void write_checkpoint(std::ostream& os, GridState const& g)
{
    os.write(checkpoint_magic.data(), checkpoint_magic.size());
    detail::write_raw(os, checkpoint_version);
    detail::write_raw(os, static_cast<std::uint64_t>(g.nx));
    detail::write_raw(os, static_cast<std::uint64_t>(g.ny));
    for (double v : {g.hx, g.hy, g.x0, g.y0, g.time})
    {
        detail::write_raw(os, v);
    }
    os.write(reinterpret_cast<char const*>(g.field.data()),
             static_cast<std::streamsize>(g.field.size() * sizeof(Complex)));
    if (!os)
    {
        throw std::runtime_error("checkpoint: write failed");
    }
}

inline GridState read_checkpoint(std::istream& is)
{
    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != checkpoint_magic)
    {
        throw std::runtime_error("checkpoint: bad magic");
    }
    auto const version = detail::read_raw<std::uint32_t>(is);
    if (version != checkpoint_version)
    {
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    }
    GridState g;
    g.nx = detail::read_raw<std::uint64_t>(is);
    g.ny = detail::read_raw<std::uint64_t>(is);
    if (g.nx == 0 || g.ny == 0 || g.nx > (1u << 20) || g.ny > (1u << 20))
    {
        throw std::runtime_error("checkpoint: implausible grid size");
    }
    g.hx = detail::read_raw<double>(is);
    g.hy = detail::read_raw<double>(is);
    g.x0 = detail::read_raw<double>(is);
    g.y0 = detail::read_raw<double>(is);
    g.time = detail::read_raw<double>(is);
    g.field.resize(g.nx * g.ny);
    is.read(reinterpret_cast<char*>(g.field.data()),
            static_cast<std::streamsize>(g.field.size() * sizeof(Complex)));
    if (!is)
    {
        throw std::runtime_error("checkpoint: truncated field data");
    }
    return g;
}

inline void save_checkpoint(std::string const& path, GridState const& g)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
    {
        throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");
    }
    write_checkpoint(os, g);
}

inline GridState load_checkpoint(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
    {
        throw std::runtime_error("checkpoint: cannot open '" + path + "'");
    }
    return read_checkpoint(is);
}

}  // namespace qorder::dynamics
