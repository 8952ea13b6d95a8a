#pragma once

#include <variant>

#include "bodies.hpp"

namespace geominima
{

//! Atoms (u_F, area(F)) of a polytope's surface area measure.
struct DiscreteMeasure
{
    Mat normals;
    Vec masses;
};

//! Curvature function f_K sampled on a grid: dS = f_K d sigma.
struct DensityMeasure
{
    SphericalGrid grid;
    Vec values;
};

struct SurfaceMeasure
{
    std::variant<DiscreteMeasure, DensityMeasure> data;

    bool is_discrete() const
    {
        return std::holds_alternative<DiscreteMeasure>(data);
    }

    double total_mass() const
    {
        if (auto const* d = std::get_if<DiscreteMeasure>(&data))
            return d->masses.sum();
        auto const& c = std::get<DensityMeasure>(data);
        return c.grid.weights.dot(c.values);
    }
};

//! Default rule for functionals of smooth bodies (4096 nodes in 2-D/3-D).
inline SphericalGrid const& default_grid(int n)
{
    static SphericalGrid const g2 = make_grid(2, 4096);
    static SphericalGrid const g3 = make_grid(3, 4096);
    if (n == 2)
        return g2;
    if (n == 3)
        return g3;
    throw UnsupportedError("smooth-body functionals need n in {2,3}");
}

namespace detail
{
//! Positive curvature everywhere, checked on 4096 angles for Fourier bodies.
inline bool has_positive_curvature(ConvexBody const& k)
{
    return std::visit(
        [&](auto const& r) -> bool {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ellipsoid>
                          || std::is_same_v<T, ShiftedBall>)
            {
                return true;
            }
            else if constexpr (std::is_same_v<T, FourierBody2D>)
            {
                double hmax = 0;
                auto const ext = fourier_extrema(r, hmax);
                return ext.second > 1e-12 * hmax;
            }
            else if constexpr (std::is_same_v<T, LinearImage>)
            {
                return has_positive_curvature(*r.base);
            }
            else if constexpr (std::is_same_v<T, PolarBody>)
            {
                return has_positive_curvature(*r.of);
            }
            else
            {
                return false;
            }
        },
        k.repr());
}
}  // namespace detail

//! True when K has a continuous positive curvature function (class F_0^+).
inline bool in_F0plus(ConvexBody const& k)
{
    return detail::has_positive_curvature(k);
}

/*!
 * Class membership of K. Centering is tested to \c tol relative to the
 * support scale; every constructed body already has the origin interior.
 */
inline BodyClassTag classify(ConvexBody const& k, double tol = 1e-9)
{
    BodyClassTag tag;
    tag.in_K0 = true;
    double scale = 0;
    for (int i = 0; i < k.dim(); ++i)
    {
        Vec const e = Vec::Unit(k.dim(), i);
        scale = std::max({scale, detail::support_unchecked(k, e),
                          detail::support_unchecked(k, Vec(-e))});
    }
    tag.in_Kc = centroid(k).norm() <= tol * scale;
    try
    {
        tag.in_Ks = santalo_point(k).norm() <= tol * scale;
    }
    catch (ConvergenceError const&)
    {
        tag.in_Ks = false;
    }
    tag.in_F0plus = in_F0plus(k);
    return tag;
}

namespace detail
{
inline double curvature_unchecked(ConvexBody const& k, Vec const& u)
{
    int const n = k.dim();
    return std::visit(
        [&](auto const& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ellipsoid>)
            {
                double const d = r.matrix.determinant();
                return d * d
                       / std::pow((r.matrix.transpose() * u).norm(), n + 1);
            }
            else if constexpr (std::is_same_v<T, ShiftedBall>)
            {
                return std::pow(r.radius, n - 1);
            }
            else if constexpr (std::is_same_v<T, FourierBody2D>)
            {
                auto const e = fourier_eval(r, theta_of(u));
                return e.h + e.d2;
            }
            else if constexpr (std::is_same_v<T, LinearImage>)
            {
                double const d = r.map.determinant();
                Vec const w = r.map.transpose() * u;
                double const len = w.norm();
                return d * d * std::pow(len, -(n + 1))
                       * curvature_unchecked(*r.base, w / len);
            }
            else if constexpr (std::is_same_v<T, PolarBody>)
            {
                // f_{P°}(u) = (rho_P(u) / h_P(nu))^{n+1} / f_P(nu), with nu
                // the normal of P at rho_P(u) u.
                Vec const nu = boundary_normal(*r.of, u);
                double const ratio = radial_unchecked(*r.of, u)
                                     / support_unchecked(*r.of, nu);
                return std::pow(ratio, n + 1)
                       / curvature_unchecked(*r.of, nu);
            }
            else
            {
                throw DomainError("polytopes have no curvature function");
            }
        },
        k.repr());
}
}  // namespace detail

//! Curvature function f_K(u); DomainError unless K is in F_0^+.
inline double curvature(ConvexBody const& k, Vec const& u)
{
    require_unit(u);
    if (!in_F0plus(k))
        throw DomainError("body has no positive curvature function");
    return detail::curvature_unchecked(k, u);
}

//! f_p(K, u) = h_K(u)^{1-p} f_K(u).
inline double lp_curvature(ConvexBody const& k, double p, Vec const& u)
{
    double const f = curvature(k, u);
    double const h = detail::support_unchecked(k, u);
    return std::exp((1 - p) * std::log(h) + std::log(f));
}

//! S(K, .): atoms for polytopes, curvature density for smooth bodies.
inline SurfaceMeasure surface_measure(ConvexBody const& k,
                                      SphericalGrid const& grid)
{
    if (k.is_polytope())
    {
        auto const* g = k.geometry();
        if (!g)
            throw UnsupportedError("polytope surface measure needs n in {2,3}");
        DiscreteMeasure d;
        d.normals.resize(k.dim(), static_cast<Eigen::Index>(g->facets.size()));
        d.masses.resize(static_cast<Eigen::Index>(g->facets.size()));
        for (std::size_t i = 0; i < g->facets.size(); ++i)
        {
            auto const j = static_cast<Eigen::Index>(i);
            d.normals.col(j) = g->facets[i].normal;
            d.masses(j) = g->facets[i].area;
        }
        return SurfaceMeasure{std::move(d)};
    }
    if (grid.dim != k.dim())
        throw InputError("grid dimension does not match the body");
    if (!in_F0plus(k))
        throw DomainError("body has no positive curvature function");
    DensityMeasure d{grid, Vec(grid.size())};
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        d.values(i) = detail::curvature_unchecked(k, grid.nodes.col(i));
    double const mx = d.values.maxCoeff();
    if (!(d.values.minCoeff() > 1e-12 * mx))
        throw DomainError("curvature density is not strictly positive");
    return SurfaceMeasure{std::move(d)};
}

}  // namespace geominima
