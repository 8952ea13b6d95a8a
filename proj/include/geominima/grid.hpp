#pragma once

#include <string>
#include <vector>

#include "core.hpp"

namespace geominima
{

//---------------------------------------------------------------------------//
/*!
 * Quadrature rule on S^{n-1}.
 *
 * - n = 2: \c resolution equally spaced angles theta_i = 2 pi i / N with
 *   equal weights (trapezoid; exact on trig polynomials of degree < N).
 * - n = 3: Gauss-Legendre in cos(theta) with m = floor(sqrt(resolution/2))
 *   nodes times 2m equally spaced azimuths.
 * - n >= 4: Halton points pushed through Box-Muller and normalized, equal
 *   weights n omega_n / N.
 *
 * Nodes are the columns of \c nodes.
 */
struct SphericalGrid
{
    int dim = 0;
    int resolution = 0;
    Mat nodes;
    Vec weights;
    std::string id;

    Eigen::Index size() const { return nodes.cols(); }
};

namespace detail
{
//! Gauss-Legendre nodes/weights on [-1, 1] by Newton on P_m.
inline void gauss_legendre(int m, Vec& x, Vec& w)
{
    x.resize(m);
    w.resize(m);
    for (int i = 0; i < m; ++i)
    {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it)
        {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= m; ++k)
            {
                double const p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (m == 1)
                p1 = z, p0 = 1;
            dp = m * (z * p1 - p0) / (z * z - 1);
            double const dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        x(i) = z;
        w(i) = 2 / ((1 - z * z) * dp * dp);
    }
}

inline double radical_inverse(unsigned long long i, unsigned base)
{
    double f = 1, r = 0;
    while (i > 0)
    {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}
}  // namespace detail

inline SphericalGrid make_grid(int n, int resolution)
{
    if (n < 2)
        throw InputError("grid dimension must be at least 2");
    if (resolution < 8)
        throw InputError("grid resolution must be at least 8");
    SphericalGrid g;
    g.dim = n;
    g.resolution = resolution;
    double const pi = std::numbers::pi;
    if (n == 2)
    {
        g.nodes.resize(2, resolution);
        g.weights = Vec::Constant(resolution, 2 * pi / resolution);
        for (int i = 0; i < resolution; ++i)
        {
            double const t = 2 * pi * i / resolution;
            g.nodes(0, i) = std::cos(t);
            g.nodes(1, i) = std::sin(t);
        }
        g.id = "s1-trapezoid-" + std::to_string(resolution);
    }
    else if (n == 3)
    {
        int const m = std::max(2, static_cast<int>(std::sqrt(resolution / 2.0)));
        int const k = 2 * m;
        Vec x, w;
        detail::gauss_legendre(m, x, w);
        g.nodes.resize(3, m * k);
        g.weights.resize(m * k);
        for (int i = 0; i < m; ++i)
        {
            double const s = std::sqrt(std::max(0.0, 1 - x(i) * x(i)));
            for (int j = 0; j < k; ++j)
            {
                double const phi = 2 * pi * j / k;
                int const c = i * k + j;
                g.nodes(0, c) = s * std::cos(phi);
                g.nodes(1, c) = s * std::sin(phi);
                g.nodes(2, c) = x(i);
                g.weights(c) = w(i) * 2 * pi / k;
            }
        }
        g.id = "s2-gauss-legendre-" + std::to_string(m) + "x"
               + std::to_string(k);
    }
    else
    {
        static constexpr unsigned primes[]
            = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
        int const pairs = (n + 1) / 2;
        if (2 * pairs > 16)
            throw UnsupportedError("quasi-random grid supports n <= 16");
        g.nodes.resize(n, resolution);
        for (int i = 0; i < resolution; ++i)
        {
            auto const idx = static_cast<unsigned long long>(i) + 1;
            Vec v(2 * pairs);
            for (int j = 0; j < pairs; ++j)
            {
                double const u1 = detail::radical_inverse(idx, primes[2 * j]);
                double const u2
                    = detail::radical_inverse(idx, primes[2 * j + 1]);
                double const r = std::sqrt(-2 * std::log(u1));
                v(2 * j) = r * std::cos(2 * pi * u2);
                v(2 * j + 1) = r * std::sin(2 * pi * u2);
            }
            Vec const head = v.head(n);
            g.nodes.col(i) = head / head.norm();
        }
        g.weights = Vec::Constant(resolution, sphere_area(n) / resolution);
        g.id = "s" + std::to_string(n - 1) + "-halton-"
               + std::to_string(resolution);
    }
    return g;
}

}  // namespace geominima
