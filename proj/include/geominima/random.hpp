#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "bodies.hpp"

namespace geominima
{

struct RandomBodySpec
{
    std::string kind = "polytope-hull";  //!< polytope-hull | ellipsoid |
                                         //!< fourier2d | shifted-ball
    int dim = 2;
    int size = 12;  //!< points for polytope-hull, max degree for fourier2d
    std::uint64_t seed = 0;
};

namespace detail
{
inline Vec random_unit(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> normal;
    Vec v(n);
    do
    {
        for (int i = 0; i < n; ++i)
            v(i) = normal(rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}
}  // namespace detail

/*!
 * Seeded random convex body with the origin in its interior.
 *
 * - polytope-hull: hull of \c size points in the annulus 0.5 <= |x| <= 1,
 *   translated so its centroid is the origin.
 * - ellipsoid: Q diag(s) Q^T with Q Haar-orthogonal and log s uniform on
 *   [0, ln 10], so the condition number is at most 10.
 * - fourier2d: h = 1 + small translation terms + decaying random harmonics
 *   up to degree \c size; harmonics of degree >= 2 are shrunk by 0.7 until
 *   min(h + h'') >= 0.01 min h.
 * - shifted-ball: radius in [0.5, 2], |center| < 0.9 radius.
 */
inline ConvexBody random_body(RandomBodySpec const& spec)
{
    int const n = spec.dim;
    if (n < 2)
        throw InputError("random body dimension must be at least 2");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal;

    if (spec.kind == "polytope-hull")
    {
        if (n > 3)
            throw UnsupportedError("random polytopes need n in {2,3}");
        if (spec.size < n + 1)
            throw InputError("polytope-hull needs at least n + 1 points");
        Mat pts(n, spec.size);
        for (int i = 0; i < spec.size; ++i)
            pts.col(i) = (0.5 + 0.5 * unif(rng)) * detail::random_unit(rng, n);
        auto const g = hull_of_points(pts);
        auto const m = polytope_moments(g);
        Vec const c = m.first / m.mass;
        return ConvexBody::v_polytope(g.vertices.colwise() - c);
    }
    if (spec.kind == "ellipsoid")
    {
        Mat gauss(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gauss(i, j) = normal(rng);
        Eigen::HouseholderQR<Mat> qr(gauss);
        Mat q = qr.householderQ();
        Vec s(n);
        for (int i = 0; i < n; ++i)
            s(i) = std::exp(std::log(10.0) * unif(rng));
        return ConvexBody::ellipsoid(q * s.asDiagonal() * q.transpose());
    }
    if (spec.kind == "fourier2d")
    {
        if (n != 2)
            throw InputError("fourier2d bodies are planar");
        int const deg = std::max(2, spec.size);
        Vec a = Vec::Zero(deg + 1), b = Vec::Zero(deg + 1);
        a(0) = 1;
        a(1) = 0.1 * (2 * unif(rng) - 1);
        b(1) = 0.1 * (2 * unif(rng) - 1);
        for (int k = 2; k <= deg; ++k)
        {
            double const scale = 0.3 / (k * k);
            a(k) = scale * normal(rng);
            b(k) = scale * normal(rng);
        }
        for (int attempt = 0; attempt < 100; ++attempt)
        {
            FourierBody2D const f{a, b};
            double hmax = 0;
            auto const [hmin, cmin] = detail::fourier_extrema(f, hmax);
            if (hmin > 0 && cmin >= 0.01 * hmin)
                return ConvexBody::fourier2d(a, b);
            a.tail(deg - 1) *= 0.7;
            b.tail(deg - 1) *= 0.7;
        }
        throw GenerationError("fourier2d convexity projection failed after "
                              "100 attempts");
    }
    if (spec.kind == "shifted-ball")
    {
        double const r = 0.5 + 1.5 * unif(rng);
        Vec const c = 0.9 * r * unif(rng) * detail::random_unit(rng, n);
        return ConvexBody::shifted_ball(c, r);
    }
    throw InputError("unknown random body kind '" + spec.kind + "'");
}

}  // namespace geominima
