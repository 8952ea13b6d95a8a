#pragma once

#include <random>

#include "measures.hpp"

namespace geominima
{

//---------------------------------------------------------------------------//
/*!
 * Star body about the origin, given by its radial function on a grid.
 */
struct StarBody
{
    SphericalGrid grid;
    Vec rho;

    double volume() const
    {
        return grid.weights.dot(rho.array().pow(grid.dim).matrix()) / grid.dim;
    }
};

namespace detail
{
/*!
 * Cone-volume sample of K: V_p(K, Q) = sum_i mass_i (h_Q(d_i) / h_K(d_i))^p.
 *
 * mass_i = h_K(d_i) dS(K, d_i) / n. Polytopes give exact atoms. Ellipsoids,
 * shifted balls and linear images are pushed forward from a sample of the
 * base body, since cone volumes transform linearly; this keeps the
 * quadrature error of an eccentric ellipsoid at that of a shifted ball.
 */
struct ConeSample
{
    Mat dirs;
    Vec mass;
    Vec log_h;
};

inline ConeSample cone_sample(ConvexBody const& k, SphericalGrid const& grid)
{
    int const n = k.dim();
    if (k.is_polytope())
    {
        auto const* g = k.geometry();
        if (!g)
            throw DomainError("polytope surface measure needs n in {2,3}");
        auto const m = static_cast<Eigen::Index>(g->facets.size());
        ConeSample s{Mat(n, m), Vec(m), Vec(m)};
        for (Eigen::Index i = 0; i < m; ++i)
        {
            auto const& f = g->facets[static_cast<std::size_t>(i)];
            s.dirs.col(i) = f.normal;
            s.mass(i) = f.offset * f.area / n;
            s.log_h(i) = std::log(f.offset);
        }
        return s;
    }
    if (grid.dim != n)
        throw InputError("grid dimension does not match the body");
    auto shifted_ball_sample = [&](Vec const& c, double radius) {
        ConeSample s{grid.nodes, Vec(grid.size()), Vec(grid.size())};
        for (Eigen::Index i = 0; i < grid.size(); ++i)
        {
            double const h = radius + c.dot(grid.nodes.col(i));
            s.mass(i) = grid.weights(i) * h * std::pow(radius, n - 1) / n;
            s.log_h(i) = std::log(h);
        }
        return s;
    };
    auto push_forward = [&](ConeSample s, Mat const& t) {
        Mat const tinv_t = t.transpose().inverse();
        double const det = std::abs(t.determinant());
        for (Eigen::Index i = 0; i < s.dirs.cols(); ++i)
        {
            Vec const v = tinv_t * s.dirs.col(i);
            double const len = v.norm();
            s.dirs.col(i) = v / len;
            s.log_h(i) -= std::log(len);
            s.mass(i) *= det;
        }
        return s;
    };
    if (auto const* b = k.as<ShiftedBall>())
        return shifted_ball_sample(b->center, b->radius);
    if (auto const* e = k.as<Ellipsoid>())
    {
        Vec const c = e->matrix.partialPivLu().solve(e->center);
        return push_forward(shifted_ball_sample(c, 1.0), e->matrix);
    }
    if (auto const* li = k.as<LinearImage>())
        return push_forward(cone_sample(*li->base, grid), li->map);
    if (!in_F0plus(k))
        throw DomainError("body has no computable surface measure");
    ConeSample s{grid.nodes, Vec(grid.size()), Vec(grid.size())};
    for (Eigen::Index i = 0; i < grid.size(); ++i)
    {
        Vec const u = grid.nodes.col(i);
        double const h = support_unchecked(k, u);
        s.mass(i) = grid.weights(i) * curvature_unchecked(k, u) * h / n;
        s.log_h(i) = std::log(h);
    }
    return s;
}

//! Log of h_Q at every sample direction.
inline Vec log_support_at(ConvexBody const& q, Mat const& dirs)
{
    Vec out(dirs.cols());
    if (auto const* g = q.geometry())
    {
        Mat const dots = g->vertices.transpose() * dirs;
        for (Eigen::Index i = 0; i < dirs.cols(); ++i)
            out(i) = std::log(dots.col(i).maxCoeff());
        return out;
    }
    for (Eigen::Index i = 0; i < dirs.cols(); ++i)
        out(i) = std::log(support_unchecked(q, dirs.col(i)));
    return out;
}

//! sum_i mass_i exp(p (log h_Q - log h_K)), evaluated in log-space.
inline double sample_vp(ConeSample const& s, Vec const& log_hq, double p)
{
    if (p == 0)
        return s.mass.sum();
    double total = 0;
    for (Eigen::Index i = 0; i < s.mass.size(); ++i)
        total += s.mass(i) * std::exp(p * (log_hq(i) - s.log_h(i)));
    return total;
}
}  // namespace detail

//---------------------------------------------------------------------------//
//! V_p(K, Q) = (1/n) int h_Q^p h_K^{1-p} dS(K, .).
inline double mixed_volume_p(ConvexBody const& k,
                             ConvexBody const& q,
                             double p,
                             SphericalGrid const* grid = nullptr)
{
    if (k.dim() != q.dim())
        throw InputError("bodies have different dimensions");
    auto const& g = grid ? *grid : default_grid(k.dim());
    auto const s = detail::cone_sample(k, g);
    if (&k == &q)
        return detail::sample_vp(s, s.log_h, p);
    return detail::sample_vp(s, detail::log_support_at(q, s.dirs), p);
}

//! V_p(K, L°) = (1/n) int rho_L^{-p} dS_p(K, .), on L's grid.
inline double mixed_volume_p_star(ConvexBody const& k,
                                  StarBody const& l,
                                  double p)
{
    if (l.grid.dim != k.dim())
        throw InputError("star body grid dimension does not match the body");
    if (k.is_polytope())
    {
        throw InputError("polytope K: the star body grid does not contain "
                         "the facet normals");
    }
    if (!(l.rho.minCoeff() > 0))
        throw DomainError("star body radial function must be positive");
    // The density route keeps the sample on L's grid.
    if (!in_F0plus(k))
        throw DomainError("body has no positive curvature function");
    int const n = k.dim();
    double total = 0;
    for (Eigen::Index i = 0; i < l.grid.size(); ++i)
    {
        Vec const u = l.grid.nodes.col(i);
        double const h = detail::support_unchecked(k, u);
        double const f = detail::curvature_unchecked(k, u);
        total += l.grid.weights(i) * f
                 * std::exp((1 - p) * std::log(h) - p * std::log(l.rho(i)));
    }
    return total / n;
}

//! S_p(K) = n V_p(K, B).
inline double p_surface_area(ConvexBody const& k,
                             double p,
                             SphericalGrid const* grid = nullptr)
{
    auto const& g = grid ? *grid : default_grid(k.dim());
    auto const s = detail::cone_sample(k, g);
    return k.dim() * detail::sample_vp(s, Vec::Zero(s.mass.size()), p);
}

//! Mahler volume product |K| |K°|.
inline double mahler(ConvexBody const& k)
{
    return volume(k) * volume(polar(k));
}

//---------------------------------------------------------------------------//
/*!
 * L_p affine surface area as_p(K) = int f_p(K, u)^{n/(n+p)} d sigma.
 *
 * Ellipsoids and shifted balls reduce to a one-body integral via
 * as_p(T K) = |det T|^{(n-p)/(n+p)} as_p(K).
 */
inline double affine_surface_area_p(ConvexBody const& k,
                                    double p,
                                    SphericalGrid const* grid = nullptr)
{
    int const n = k.dim();
    require_not_minus_n(n, p);
    if (!in_F0plus(k))
        throw DomainError("as_p needs a positive curvature function");
    if (p == 0)
        return n * volume(k);
    auto const& g = grid ? *grid : default_grid(n);
    double const ex = n / (n + p);
    double const degree = (n - p) / (n + p);
    auto shifted = [&](Vec const& c, double r) {
        // f_p(B(c, r)) = (r + <c,u>)^{1-p} r^{n-1}
        double total = 0;
        for (Eigen::Index i = 0; i < g.size(); ++i)
        {
            double const h = 1 + c.dot(g.nodes.col(i)) / r;
            total += g.weights(i) * pow_pos(h, (1 - p) * ex);
        }
        return pow_pos(r, n * degree) * total;
    };
    if (auto const* b = k.as<ShiftedBall>())
        return shifted(b->center, b->radius);
    if (auto const* e = k.as<Ellipsoid>())
    {
        Vec const c = e->matrix.partialPivLu().solve(e->center);
        return pow_pos(std::abs(e->matrix.determinant()), degree)
               * shifted(c, 1.0);
    }
    if (auto const* li = k.as<LinearImage>())
    {
        return pow_pos(std::abs(li->map.determinant()), degree)
               * affine_surface_area_p(*li->base, p, grid);
    }
    double total = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i)
    {
        Vec const u = g.nodes.col(i);
        double const lf = std::log(detail::curvature_unchecked(k, u))
                          + (1 - p) * std::log(detail::support_unchecked(k, u));
        total += g.weights(i) * std::exp(ex * lf);
    }
    return total;
}

namespace detail
{
//! log f_p(K, u_i) on a grid.
inline Vec log_lp_curvature(ConvexBody const& k,
                            double p,
                            SphericalGrid const& g)
{
    if (!in_F0plus(k))
        throw DomainError("body has no positive curvature function");
    Vec out(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
    {
        Vec const u = g.nodes.col(i);
        out(i) = std::log(curvature_unchecked(k, u))
                 + (1 - p) * std::log(support_unchecked(k, u));
    }
    return out;
}

//! n V_p(K, L°)^{n/(n+p)} |L|^{p/(n+p)} with f_p given on L's grid.
inline double variational_objective(Vec const& log_fp,
                                    StarBody const& l,
                                    double p)
{
    int const n = l.grid.dim;
    double v = 0;
    for (Eigen::Index i = 0; i < l.grid.size(); ++i)
        v += l.grid.weights(i) * std::exp(log_fp(i) - p * std::log(l.rho(i)));
    v /= n;
    double const vol = l.volume();
    return n * std::exp(n / (n + p) * std::log(v) + p / (n + p) * std::log(vol));
}
}  // namespace detail

struct VariationalResult
{
    double value = 0;
    StarBody optimizer;
    //! min over trials of (trial - value), sign-flipped for p < 0; >= 0 when
    //! the optimizer is extremal among the trials.
    double trial_margin = 0;
    int trials = 0;
};

/*!
 * Variational form of as_p: the extremum over star bodies L of
 * n V_p(K, L°)^{n/(n+p)} |L|^{p/(n+p)}, attained at rho_L = f_p^{1/(n+p)}.
 *
 * Each trial multiplies the optimizer by exp of a random low-degree
 * trigonometric (n = 2) or linear-plus-quadratic (n = 3) perturbation.
 */
inline VariationalResult affine_surface_area_p_variational(
    ConvexBody const& k,
    double p,
    SphericalGrid const& grid,
    int trials = 100,
    unsigned long long seed = 1)
{
    int const n = k.dim();
    require_not_minus_n(n, p);
    if (grid.dim != n)
        throw InputError("grid dimension does not match the body");
    Vec const lf = detail::log_lp_curvature(k, p, grid);
    VariationalResult out;
    out.optimizer.grid = grid;
    out.optimizer.rho = (lf / (n + p)).array().exp().matrix();
    out.value = detail::variational_objective(lf, out.optimizer, p);
    out.trials = trials;
    out.trial_margin = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.2);
    double const sign = p >= 0 ? 1.0 : -1.0;
    for (int t = 0; t < trials; ++t)
    {
        Mat const quad = Mat::NullaryExpr(n, n, [&] { return normal(rng); });
        Vec const lin = Vec::NullaryExpr(n, [&] { return normal(rng); });
        StarBody trial{grid, out.optimizer.rho};
        for (Eigen::Index i = 0; i < grid.size(); ++i)
        {
            Vec const u = grid.nodes.col(i);
            trial.rho(i) *= std::exp(lin.dot(u) + u.dot(quad * u));
        }
        double const val = detail::variational_objective(lf, trial, p);
        out.trial_margin = std::min(out.trial_margin, sign * (val - out.value));
    }
    if (trials == 0)
        out.trial_margin = 0;
    return out;
}

struct CurvatureImage
{
    StarBody body;
    double lambda = 0;          //!< prescribed |Lambda_p K|
    double volume_defect = 0;   //!< relative | |body| - lambda |
    double identity_defect = 0; //!< relative defect of as_p^{n+p} identity
};

/*!
 * p-curvature image: f_p(K, u) = (omega_n / |Lambda|) rho_Lambda(u)^{n+p}.
 *
 * With rho_0 = f_p^{1/(n+p)} the solution is
 * rho = (lambda / omega_n)^{1/(n+p)} rho_0 where
 * lambda = |L_0|^{(n+p)/p} omega_n^{-n/p}.
 */
inline CurvatureImage curvature_image(ConvexBody const& k,
                                      double p,
                                      SphericalGrid const& grid)
{
    int const n = k.dim();
    require_not_minus_n(n, p);
    if (p == 0)
        throw DomainError("curvature image is undefined for p = 0");
    if (grid.dim != n)
        throw InputError("grid dimension does not match the body");
    Vec const lf = detail::log_lp_curvature(k, p, grid);
    StarBody l0{grid, (lf / (n + p)).array().exp().matrix()};
    double const omega = ball_volume(n);
    double const log_l0 = std::log(l0.volume());
    double const log_lambda = (n + p) / p * log_l0 - n / p * std::log(omega);
    CurvatureImage out;
    out.lambda = std::exp(log_lambda);
    double const scale = std::exp((log_lambda - std::log(omega)) / (n + p));
    out.body = StarBody{grid, scale * l0.rho};
    double const vol = out.body.volume();
    out.volume_defect = rel_diff(vol, out.lambda);
    // [as_p]^{n+p} = n^{n+p} omega^n |Lambda|^p, compared in logs.
    double const as = grid.weights.dot((lf * (n / (n + p))).array().exp().matrix());
    double const lhs = (n + p) * std::log(as);
    double const rhs = (n + p) * std::log(static_cast<double>(n))
                       + n * std::log(omega) + p * std::log(vol);
    out.identity_defect = std::abs(std::expm1(lhs - rhs));
    return out;
}

namespace detail
{
//! Fourth-order periodic second difference on a uniform circle grid.
inline Vec periodic_second_derivative(Vec const& g)
{
    auto const m = g.size();
    double const d = 2 * std::numbers::pi / static_cast<double>(m);
    Vec out(m);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        auto at = [&](Eigen::Index j) { return g(((i + j) % m + m) % m); };
        out(i) = (-at(-2) + 16 * at(-1) - 30 * at(0) + 16 * at(1) - at(2))
                 / (12 * d * d);
    }
    return out;
}

inline void require_circle_grid(SphericalGrid const& g)
{
    if (g.dim != 2 || g.id.rfind("s1-trapezoid-", 0) != 0)
        throw UnsupportedError("convexity test needs a uniform 2-D grid");
}
}  // namespace detail

//! Convexity of a planar star body: rho^2 + 2 rho'^2 - rho rho'' >= 0.
inline bool is_convex(StarBody const& l, double tol = 1e-8)
{
    detail::require_circle_grid(l.grid);
    auto const m = l.rho.size();
    double const d = 2 * std::numbers::pi / static_cast<double>(m);
    Vec const r2 = detail::periodic_second_derivative(l.rho);
    double const scale = l.rho.maxCoeff();
    for (Eigen::Index i = 0; i < m; ++i)
    {
        auto at = [&](Eigen::Index j) { return l.rho(((i + j) % m + m) % m); };
        double const r1 = (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * d);
        double const r = l.rho(i);
        if (r * r + 2 * r1 * r1 - r * r2(i) < -tol * scale * scale)
            return false;
    }
    return true;
}

struct VpMembership
{
    bool member = false;
    //! Support values of Q on the grid, g = f_p^{-1/(n+p)}, when member.
    Vec witness;
    double min_curvature = 0;  //!< min(g + g'') / max g for n = 2
};

/*!
 * Whether f_p(K, .) = h_Q^{-(n+p)} for some convex Q (class V_p).
 *
 * Centered ellipsoids (and their linear images) are members in every
 * dimension, since g is then a multiple of |A^T u|. In the plane the test is
 * g + g'' >= -1e-8 max g on a uniform grid.
 */
inline VpMembership in_Vp(ConvexBody const& k,
                          double p,
                          SphericalGrid const& grid)
{
    int const n = k.dim();
    require_not_minus_n(n, p);
    if (grid.dim != n)
        throw InputError("grid dimension does not match the body");
    Vec const lf = detail::log_lp_curvature(k, p, grid);
    VpMembership out;
    Vec const g = (-lf / (n + p)).array().exp().matrix();
    auto centered_ellipsoid = [&](ConvexBody const& b) {
        if (auto const* e = b.as<Ellipsoid>())
            return e->center.isZero(0);
        if (auto const* s = b.as<ShiftedBall>())
            return s->center.isZero(0);
        return false;
    };
    auto const* li = k.as<LinearImage>();
    if (centered_ellipsoid(k) || (li && centered_ellipsoid(*li->base)))
    {
        out.member = true;
        out.witness = g;
        return out;
    }
    if (n != 2)
        throw UnsupportedError("V_p membership test needs n = 2 or an "
                               "origin-centered ellipsoid");
    detail::require_circle_grid(grid);
    Vec const c = g + detail::periodic_second_derivative(g);
    out.min_curvature = c.minCoeff() / g.maxCoeff();
    out.member = out.min_curvature >= -1e-8;
    if (out.member)
        out.witness = g;
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Hoelder margin for the cyclic inequality on V_p:
 * [n V_s]^{(t-r)/(t-s)} [n V_t]^{(r-s)/(t-s)} - n V_r.
 */
struct HolderMargin
{
    double lhs = 0;
    double rhs = 0;
    double margin = 0;
};

inline HolderMargin holder_cyclic_check(ConvexBody const& k,
                                        ConvexBody const& q,
                                        double r,
                                        double s,
                                        double t,
                                        SphericalGrid const* grid = nullptr)
{
    double const lam = (t - r) / (t - s);
    if (!(lam > 0 && lam < 1))
        throw InputError("need 0 < (t - r)/(t - s) < 1");
    int const n = k.dim();
    auto const& g = grid ? *grid : default_grid(n);
    auto const cs = detail::cone_sample(k, g);
    Vec const lq = detail::log_support_at(q, cs.dirs);
    double const vr = n * detail::sample_vp(cs, lq, r);
    double const vs = n * detail::sample_vp(cs, lq, s);
    double const vt = n * detail::sample_vp(cs, lq, t);
    HolderMargin m;
    m.lhs = vr;
    m.rhs = std::exp(lam * std::log(vs) + (1 - lam) * std::log(vt));
    m.margin = m.rhs - m.lhs;
    return m;
}

}  // namespace geominima
