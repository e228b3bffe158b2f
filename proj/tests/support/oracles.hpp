#pragma once

// Independent reference implementations used only by tests. None of these
// share code with the library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ictomo/geometry.hpp"
#include "ictomo/volume.hpp"

namespace oracle {

/// Straight re-reading of the two generation rounds, driven by an
/// mt19937_64 stream instead of the library's counter-based draws.
struct NaiveCircuit {
    int nx, ny, nz;
    double pw, px, py, pz;

    std::vector<int> draw(std::mt19937_64& eng) const {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<int> v(static_cast<std::size_t>(nx * ny * nz), 0);
        auto at = [&](int a, int b, int c) -> int& { return v[static_cast<std::size_t>((c - 1) * nx * ny + (b - 1) * nx + (a - 1))]; };
        for (int c = 1; c <= nz; ++c)
            for (int b = 1; b <= ny; ++b)
                for (int a = 1; a <= nx; ++a)
                    if (a % 2 && b % 2 && c % 2 && u(eng) < pw) at(a, b, c) = 1;
        for (int c = 1; c <= nz; ++c)
            for (int b = 1; b <= ny; ++b)
                for (int a = 1; a <= nx; ++a) {
                    if (at(a, b, c)) continue;
                    if (c % 4 == 1) {
                        if (a > 1 && at(a - 1, b, c) && u(eng) < px) at(a, b, c) = 1;
                    } else if (c % 4 == 3) {
                        if (b > 1 && at(a, b - 1, c) && u(eng) < py) at(a, b, c) = 1;
                    } else {
                        if (c > 1 && at(a, b, c - 1) && u(eng) < pz) at(a, b, c) = 1;
                    }
                }
        return v;
    }
};

/// Voxel a point falls in, or -1 outside the grid.
inline long voxel_of(const ictomo::forward::VoxelGrid& g, const ictomo::forward::Vec3& p) {
    const auto lo = g.lower();
    const double fx = (p.x - lo.x) / g.voxel_size.x;
    const double fy = (p.y - lo.y) / g.voxel_size.y;
    const double fz = (p.z - lo.z) / g.voxel_size.z;
    if (fx < 0 || fy < 0 || fz < 0 || fx >= g.dims.nx || fy >= g.dims.ny || fz >= g.dims.nz) return -1;
    return static_cast<long>(g.dims.index(static_cast<std::uint32_t>(fx), static_cast<std::uint32_t>(fy),
                                          static_cast<std::uint32_t>(fz)));
}

/// Per-voxel path lengths by walking the ray in fixed steps. Entry and exit
/// of every run of constant voxel are refined by bisection, so the answer is
/// far more accurate than the step itself.
/// Only the stretch of the ray inside the (slightly padded) bounding box is
/// walked; the ray from source to detector is tens of millimetres long.
inline std::vector<double> dense_sample_lengths(const ictomo::forward::VoxelGrid& g, const ictomo::forward::Ray& r,
                                                double step = 1e-3) {
    std::vector<double> out(g.dims.size(), 0.0);
    double t_lo = 0.0, t_hi = r.length;
    const auto lo = g.lower(), hi = g.upper();
    for (int ax = 0; ax < 3; ++ax) {
        const double o = r.origin[ax], d = r.direction[ax];
        const double pad = 10 * step;
        if (std::abs(d) < 1e-15) {
            if (o < lo[ax] - pad || o > hi[ax] + pad) return out;
            continue;
        }
        double a = (lo[ax] - pad - o) / d, b = (hi[ax] + pad - o) / d;
        if (a > b) std::swap(a, b);
        t_lo = std::max(t_lo, a);
        t_hi = std::min(t_hi, b);
    }
    if (t_lo >= t_hi) return out;
    auto vox = [&](double t) { return voxel_of(g, r.at(t)); };
    auto boundary = [&](double a, double b) {
        const long va = vox(a);
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b);
            (vox(m) == va ? a : b) = m;
        }
        return 0.5 * (a + b);
    };
    double t_prev = t_lo;
    long v_prev = vox(t_lo);
    double run_start = t_lo;
    const auto n = static_cast<long>(std::ceil((t_hi - t_lo) / step));
    for (long k = 1; k <= n; ++k) {
        const double t = std::min(t_hi, t_lo + static_cast<double>(k) * step);
        const long v = vox(t);
        if (v != v_prev) {
            const double tb = boundary(t_prev, t);
            if (v_prev >= 0) out[static_cast<std::size_t>(v_prev)] += tb - run_start;
            run_start = tb;
            v_prev = v;
        }
        t_prev = t;
    }
    if (v_prev >= 0) out[static_cast<std::size_t>(v_prev)] += t_hi - run_start;
    return out;
}

/// Central finite-difference gradient. The difference is taken in long
/// double, so an objective evaluated in extended precision keeps its digits.
template <class F>
std::vector<double> central_difference(F&& f, std::vector<double> x, double h) {
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double x0 = x[j];
        x[j] = x0 + h;
        const long double fp = f(x);
        x[j] = x0 - h;
        const long double fm = f(x);
        x[j] = x0;
        // Divide by the step actually taken after rounding x0 +- h.
        const long double span = static_cast<long double>(x0 + h) - static_cast<long double>(x0 - h);
        g[j] = static_cast<double>((fp - fm) / span);
    }
    return g;
}

}  // namespace oracle
