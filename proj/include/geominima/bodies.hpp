#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <variant>

#include "grid.hpp"
#include "hull.hpp"

namespace geominima
{

class ConvexBody;
using BodyPtr = std::shared_ptr<ConvexBody const>;

//! Intersection of half-spaces <x, u_i> <= h_i (columns of normals).
struct HPolytope
{
    Mat normals;
    Vec offsets;
};

//! Convex hull of the columns of \c vertices.
struct VPolytope
{
    Mat vertices;
};

//! center + A B^n_2; h(u) = |A^T u| + <center, u>.
struct Ellipsoid
{
    Mat matrix;
    Vec center;
};

//! h(theta) = a_0 + sum_k (a_k cos k theta + b_k sin k theta); b_0 unused.
struct FourierBody2D
{
    Vec a;
    Vec b;
};

//! center + radius B^n_2; h(u) = radius + <center, u>.
struct ShiftedBall
{
    Vec center;
    double radius = 1;
};

//! Exact polar of a body that has no closed polar representation.
struct PolarBody
{
    BodyPtr of;
};

//! map * base, kept symbolic for representations not closed under GL(n).
struct LinearImage
{
    Mat map;
    BodyPtr base;
};

using BodyRepr = std::variant<HPolytope,
                              VPolytope,
                              Ellipsoid,
                              FourierBody2D,
                              ShiftedBall,
                              PolarBody,
                              LinearImage>;

//---------------------------------------------------------------------------//
/*!
 * Immutable convex body with the origin in its interior.
 *
 * Construct through the static factories, which validate the representation
 * and reject bodies whose minimal support is below 1e-8 of the maximal one.
 * Polytopes in R^2 and R^3 carry their exact facet geometry.
 */
class ConvexBody
{
  public:
    static ConvexBody h_polytope(Mat normals, Vec offsets);
    static ConvexBody v_polytope(Mat vertices);
    static ConvexBody ellipsoid(Mat matrix, Vec center = {});
    static ConvexBody fourier2d(Vec a, Vec b);
    static ConvexBody shifted_ball(Vec center, double radius);
    static ConvexBody ball(int n, double radius = 1);
    static ConvexBody polar_of(ConvexBody const& k);
    static ConvexBody linear_image(Mat map, ConvexBody const& base);

    int dim() const { return dim_; }
    BodyRepr const& repr() const { return repr_; }
    template<class T>
    T const* as() const
    {
        return std::get_if<T>(&repr_);
    }
    bool is_polytope() const
    {
        return as<HPolytope>() || as<VPolytope>();
    }
    //! Facet geometry for polytopes in R^2/R^3, null otherwise.
    PolytopeGeometry const* geometry() const { return geom_.get(); }
    std::string kind() const;

  private:
    ConvexBody(int dim, BodyRepr r) : dim_(dim), repr_(std::move(r)) {}

    int dim_ = 0;
    BodyRepr repr_;
    std::shared_ptr<PolytopeGeometry const> geom_;
};

//! Membership flags for the classes K_0, K_c, K_s and F_0^+.
struct BodyClassTag
{
    bool in_K0 = false;
    bool in_Kc = false;
    bool in_Ks = false;
    bool in_F0plus = false;
};

namespace detail
{
inline double theta_of(Vec const& u)
{
    return std::atan2(u(1), u(0));
}

struct FourierEval
{
    double h = 0, d1 = 0, d2 = 0;
};

inline FourierEval fourier_eval(FourierBody2D const& f, double t)
{
    FourierEval e{f.a(0), 0, 0};
    for (Eigen::Index k = 1; k < f.a.size(); ++k)
    {
        double const c = std::cos(k * t), s = std::sin(k * t);
        double const kk = static_cast<double>(k);
        double const ak = f.a(k), bk = f.b(k);
        e.h += ak * c + bk * s;
        e.d1 += kk * (-ak * s + bk * c);
        e.d2 += -kk * kk * (ak * c + bk * s);
    }
    return e;
}

//! Boundary parameter theta whose point lies on the ray through phi.
inline double fourier_ray_theta(FourierBody2D const& f, double phi)
{
    auto g = [&](double t) {
        auto const e = fourier_eval(f, t);
        return e.h * std::sin(t - phi) + e.d1 * std::cos(t - phi);
    };
    double const half = 0.5 * std::numbers::pi;
    double lo = phi - half, hi = phi + half;
    double t = phi;
    for (int it = 0; it < 200; ++it)
    {
        double const gt = g(t);
        if (gt == 0)
            return t;
        if (gt < 0)
            lo = t;
        else
            hi = t;
        auto const e = fourier_eval(f, t);
        double const dg = (e.h + e.d2) * std::cos(t - phi);
        double next = dg > 0 ? t - gt / dg : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - t) < 1e-15 || hi - lo < 1e-15)
            return next;
        t = next;
    }
    return t;
}

//! Uniform 2-D or product 3-D rule used for smooth-body integrals.
inline SphericalGrid const& integration_grid(int n)
{
    static SphericalGrid const g2 = make_grid(2, 4096);
    static SphericalGrid const g3 = make_grid(3, 20000);
    if (n == 2)
        return g2;
    if (n == 3)
        return g3;
    throw UnsupportedError("smooth-body quadrature needs n in {2,3}");
}
}  // namespace detail

//---------------------------------------------------------------------------//
// Pointwise functions
//---------------------------------------------------------------------------//

inline double radial(ConvexBody const& k, Vec const& u);

namespace detail
{
inline double support_unchecked(ConvexBody const& k, Vec const& u);

inline double radial_unchecked(ConvexBody const& k, Vec const& u)
{
    return std::visit(
        [&](auto const& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, HPolytope>
                          || std::is_same_v<T, VPolytope>)
            {
                double best = std::numeric_limits<double>::infinity();
                if (auto const* g = k.geometry())
                {
                    for (auto const& f : g->facets)
                    {
                        double const c = f.normal.dot(u);
                        if (c > 0)
                            best = std::min(best, f.offset / c);
                    }
                }
                else if (auto const* h = k.as<HPolytope>())
                {
                    for (Eigen::Index i = 0; i < h->normals.cols(); ++i)
                    {
                        double const c = h->normals.col(i).dot(u);
                        if (c > 0)
                            best = std::min(best, h->offsets(i) / c);
                    }
                }
                else
                {
                    throw UnsupportedError(
                        "radial function of a V-polytope needs n in {2,3}");
                }
                if (!std::isfinite(best))
                    throw DomainError("polytope is unbounded along u");
                return best;
            }
            else if constexpr (std::is_same_v<T, Ellipsoid>)
            {
                auto const lu = r.matrix.partialPivLu();
                Vec const a = lu.solve(u);
                Vec const c = lu.solve(r.center);
                double const qa = a.squaredNorm();
                double const qb = a.dot(c);
                double const qc = c.squaredNorm() - 1;
                return (qb + std::sqrt(qb * qb - qa * qc)) / qa;
            }
            else if constexpr (std::is_same_v<T, ShiftedBall>)
            {
                double const b = u.dot(r.center);
                return b
                       + std::sqrt(b * b - r.center.squaredNorm()
                                   + r.radius * r.radius);
            }
            else if constexpr (std::is_same_v<T, FourierBody2D>)
            {
                double const phi = theta_of(u);
                double const t = fourier_ray_theta(r, phi);
                auto const e = fourier_eval(r, t);
                return e.h * std::cos(t - phi) - e.d1 * std::sin(t - phi);
            }
            else if constexpr (std::is_same_v<T, PolarBody>)
            {
                return 1.0 / support_unchecked(*r.of, u);
            }
            else
            {
                Vec const w = r.map.partialPivLu().solve(u);
                double const len = w.norm();
                return radial_unchecked(*r.base, w / len) / len;
            }
        },
        k.repr());
}

inline double support_unchecked(ConvexBody const& k, Vec const& u)
{
    return std::visit(
        [&](auto const& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, HPolytope>
                          || std::is_same_v<T, VPolytope>)
            {
                Mat const* verts = nullptr;
                if (auto const* g = k.geometry())
                    verts = &g->vertices;
                else if (auto const* v = k.as<VPolytope>())
                    verts = &v->vertices;
                else
                    throw UnsupportedError(
                        "support of an H-polytope needs n in {2,3}");
                return (verts->transpose() * u).maxCoeff();
            }
            else if constexpr (std::is_same_v<T, Ellipsoid>)
            {
                return (r.matrix.transpose() * u).norm() + r.center.dot(u);
            }
            else if constexpr (std::is_same_v<T, ShiftedBall>)
            {
                return r.radius + r.center.dot(u);
            }
            else if constexpr (std::is_same_v<T, FourierBody2D>)
            {
                return fourier_eval(r, theta_of(u)).h;
            }
            else if constexpr (std::is_same_v<T, PolarBody>)
            {
                return 1.0 / radial_unchecked(*r.of, u);
            }
            else
            {
                Vec const w = r.map.transpose() * u;
                double const len = w.norm();
                return len * support_unchecked(*r.base, w / len);
            }
        },
        k.repr());
}
}  // namespace detail

//! h_K(u) for a unit vector u.
inline double support(ConvexBody const& k, Vec const& u)
{
    if (u.size() != k.dim())
        throw InputError("direction has wrong dimension");
    require_unit(u);
    return detail::support_unchecked(k, u);
}

//! rho_K(u) for a unit vector u.
inline double radial(ConvexBody const& k, Vec const& u)
{
    if (u.size() != k.dim())
        throw InputError("direction has wrong dimension");
    require_unit(u);
    return detail::radial_unchecked(k, u);
}

/*!
 * The point of K with outer normal u (gradient of h_K at u).
 *
 * Defined for smooth representations and their polars/linear images.
 */
inline Vec support_point(ConvexBody const& k, Vec const& u);

/*!
 * Outer unit normal of K at the boundary point rho_K(u) u.
 *
 * Defined for smooth representations (ellipsoid, shifted ball, Fourier body
 * and their linear images).
 */
inline Vec boundary_normal(ConvexBody const& k, Vec const& u)
{
    return std::visit(
        [&](auto const& r) -> Vec {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ellipsoid>)
            {
                Vec const x = detail::radial_unchecked(k, u) * u - r.center;
                Mat const ai = r.matrix.inverse();
                Vec const n = ai.transpose() * (ai * x);
                return n.normalized();
            }
            else if constexpr (std::is_same_v<T, ShiftedBall>)
            {
                Vec const x = detail::radial_unchecked(k, u) * u - r.center;
                return x.normalized();
            }
            else if constexpr (std::is_same_v<T, FourierBody2D>)
            {
                double const t
                    = detail::fourier_ray_theta(r, detail::theta_of(u));
                Vec n(2);
                n << std::cos(t), std::sin(t);
                return n;
            }
            else if constexpr (std::is_same_v<T, LinearImage>)
            {
                Vec const w = r.map.partialPivLu().solve(u);
                Vec const nb = boundary_normal(*r.base, w.normalized());
                return r.map.transpose().partialPivLu().solve(nb).normalized();
            }
            else if constexpr (std::is_same_v<T, PolarBody>)
            {
                // Boundary point x of the base with normal nu maps to the
                // point nu / h(nu) of the polar, whose normal is x / |x|.
                return support_point(*r.of, u).normalized();
            }
            else
            {
                throw UnsupportedError("boundary normal of a polytope");
            }
        },
        k.repr());
}

inline Vec support_point(ConvexBody const& k, Vec const& u)
{
    return std::visit(
        [&](auto const& r) -> Vec {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ellipsoid>)
            {
                Vec const w = r.matrix.transpose() * u;
                return r.center + r.matrix * w / w.norm();
            }
            else if constexpr (std::is_same_v<T, ShiftedBall>)
            {
                return r.center + r.radius * u;
            }
            else if constexpr (std::is_same_v<T, FourierBody2D>)
            {
                double const t = detail::theta_of(u);
                auto const e = detail::fourier_eval(r, t);
                Vec x(2);
                x << e.h * std::cos(t) - e.d1 * std::sin(t),
                    e.h * std::sin(t) + e.d1 * std::cos(t);
                return x;
            }
            else if constexpr (std::is_same_v<T, LinearImage>)
            {
                Vec const w = r.map.transpose() * u;
                return r.map * support_point(*r.base, w / w.norm());
            }
            else if constexpr (std::is_same_v<T, PolarBody>)
            {
                Vec const nu = boundary_normal(*r.of, u);
                return nu / detail::support_unchecked(*r.of, nu);
            }
            else
            {
                throw UnsupportedError("support point of a polytope");
            }
        },
        k.repr());
}

//---------------------------------------------------------------------------//
// Factories
//---------------------------------------------------------------------------//

namespace detail
{
inline void check_degenerate(double hmin, double hmax)
{
    if (!(hmin > 0))
        throw DomainError("origin is not interior to the body");
    if (hmin < 1e-8 * hmax)
        throw DomainError("origin too close to boundary (min support "
                          + std::to_string(hmin) + ", max "
                          + std::to_string(hmax) + ")");
}

inline void check_geometry(PolytopeGeometry const& g)
{
    double hmin = std::numeric_limits<double>::infinity();
    for (auto const& f : g.facets)
        hmin = std::min(hmin, f.offset);
    check_degenerate(hmin, max_norm(g.vertices));
}

//! Dense sample of h and h + h'' for a Fourier body.
inline std::pair<double, double> fourier_extrema(FourierBody2D const& f,
                                                 double& hmax)
{
    int const m = 4096;
    double hmin = std::numeric_limits<double>::infinity();
    double cmin = hmin;
    hmax = 0;
    for (int i = 0; i < m; ++i)
    {
        auto const e = fourier_eval(f, 2 * std::numbers::pi * i / m);
        hmin = std::min(hmin, e.h);
        hmax = std::max(hmax, e.h);
        cmin = std::min(cmin, e.h + e.d2);
    }
    return {hmin, cmin};
}
}  // namespace detail

inline ConvexBody ConvexBody::h_polytope(Mat normals, Vec offsets)
{
    int const n = static_cast<int>(normals.rows());
    if (n < 2 || normals.cols() != offsets.size() || normals.cols() <= n)
        throw InputError("h-polytope needs more than n half-spaces in n >= 2");
    for (Eigen::Index i = 0; i < normals.cols(); ++i)
    {
        double const len = normals.col(i).norm();
        if (std::abs(len - 1) > 1e-9)
            throw InputError("h-polytope normals must be unit vectors");
        normals.col(i) /= len;
        if (!(offsets(i) > 0))
            throw DomainError("h-polytope offsets must be positive");
    }
    ConvexBody k(n, HPolytope{normals, offsets});
    if (n <= 3)
    {
        auto g = std::make_shared<PolytopeGeometry>(
            hull_of_halfspaces(normals, offsets));
        detail::check_geometry(*g);
        k.geom_ = std::move(g);
    }
    return k;
}

inline ConvexBody ConvexBody::v_polytope(Mat vertices)
{
    int const n = static_cast<int>(vertices.rows());
    if (n < 2 || vertices.cols() <= n)
        throw InputError("v-polytope needs more than n points in n >= 2");
    if (n > 3)
        throw UnsupportedError("v-polytopes need n in {2,3}");
    auto g = std::make_shared<PolytopeGeometry>(hull_of_points(vertices));
    detail::check_geometry(*g);
    ConvexBody k(n, VPolytope{vertices});
    k.geom_ = std::move(g);
    return k;
}

inline ConvexBody ConvexBody::ellipsoid(Mat matrix, Vec center)
{
    int const n = static_cast<int>(matrix.rows());
    if (n < 2 || matrix.cols() != n)
        throw InputError("ellipsoid matrix must be square with n >= 2");
    if (center.size() == 0)
        center = Vec::Zero(n);
    if (center.size() != n)
        throw InputError("ellipsoid center has wrong dimension");
    double const det = matrix.determinant();
    if (!(std::abs(det) > 1e-12))
        throw InputError("ellipsoid matrix is singular");
    Eigen::JacobiSVD<Mat> svd(matrix);
    auto const& sv = svd.singularValues();
    double const z = matrix.partialPivLu().solve(center).norm();
    // min h >= s_min (1 - |A^{-1} c|) up to the conditioning of A.
    detail::check_degenerate(sv(n - 1) * (1 - z),
                             sv(0) + center.norm());
    return ConvexBody(n, Ellipsoid{std::move(matrix), std::move(center)});
}

inline ConvexBody ConvexBody::fourier2d(Vec a, Vec b)
{
    if (a.size() == 0)
        throw InputError("fourier body needs a constant coefficient");
    if (b.size() == 0)
        b = Vec::Zero(a.size());
    if (b.size() != a.size())
        throw InputError("fourier coefficient lists must have equal length");
    b(0) = 0;
    FourierBody2D f{std::move(a), std::move(b)};
    double hmax = 0;
    auto const [hmin, cmin] = detail::fourier_extrema(f, hmax);
    detail::check_degenerate(hmin, hmax);
    if (cmin < -1e-12 * hmax)
        throw InputError("fourier body is not convex (min h + h'' = "
                         + std::to_string(cmin) + ")");
    return ConvexBody(2, std::move(f));
}

inline ConvexBody ConvexBody::shifted_ball(Vec center, double radius)
{
    int const n = static_cast<int>(center.size());
    if (n < 2)
        throw InputError("shifted ball needs n >= 2");
    if (!(radius > 0))
        throw InputError("ball radius must be positive");
    double const c = center.norm();
    detail::check_degenerate(radius - c, radius + c);
    return ConvexBody(n, ShiftedBall{std::move(center), radius});
}

inline ConvexBody ConvexBody::ball(int n, double radius)
{
    return shifted_ball(Vec::Zero(n), radius);
}

inline ConvexBody ConvexBody::polar_of(ConvexBody const& k)
{
    return ConvexBody(k.dim(), PolarBody{std::make_shared<ConvexBody>(k)});
}

inline ConvexBody ConvexBody::linear_image(Mat map, ConvexBody const& base)
{
    int const n = base.dim();
    if (map.rows() != n || map.cols() != n)
        throw InputError("linear map has wrong shape");
    if (!(std::abs(map.determinant()) > 1e-12))
        throw InputError("linear map is singular");
    return ConvexBody(n,
                      LinearImage{std::move(map),
                                  std::make_shared<ConvexBody>(base)});
}

inline std::string ConvexBody::kind() const
{
    static constexpr char const* names[] = {"h-polytope",
                                            "v-polytope",
                                            "ellipsoid",
                                            "fourier2d",
                                            "shifted-ball",
                                            "polar",
                                            "linear-image"};
    return names[repr_.index()];
}

//---------------------------------------------------------------------------//
// Transformations
//---------------------------------------------------------------------------//

//! K° with an exact representation where one exists.
inline ConvexBody polar(ConvexBody const& k)
{
    int const n = k.dim();
    if (auto const* h = k.as<HPolytope>())
    {
        Mat v(n, h->normals.cols());
        for (Eigen::Index i = 0; i < v.cols(); ++i)
            v.col(i) = h->normals.col(i) / h->offsets(i);
        if (n > 3)
            throw UnsupportedError("polar of a polytope needs n in {2,3}");
        return ConvexBody::v_polytope(v);
    }
    if (k.as<VPolytope>())
    {
        Mat const& v = k.geometry()->vertices;
        Mat normals(n, v.cols());
        Vec offsets(v.cols());
        for (Eigen::Index i = 0; i < v.cols(); ++i)
        {
            double const len = v.col(i).norm();
            normals.col(i) = v.col(i) / len;
            offsets(i) = 1 / len;
        }
        return ConvexBody::h_polytope(normals, offsets);
    }
    if (auto const* e = k.as<Ellipsoid>())
    {
        if (e->center.isZero(0))
            return ConvexBody::ellipsoid(e->matrix.transpose().inverse());
        return ConvexBody::polar_of(k);
    }
    if (auto const* p = k.as<PolarBody>())
        return *p->of;
    if (auto const* li = k.as<LinearImage>())
    {
        return ConvexBody::linear_image(li->map.transpose().inverse(),
                                        polar(*li->base));
    }
    if (auto const* b = k.as<ShiftedBall>(); b && b->center.isZero(0))
        return ConvexBody::ball(n, 1 / b->radius);
    return ConvexBody::polar_of(k);
}

//! T K for invertible T.
inline ConvexBody linear_map(ConvexBody const& k, Mat const& t)
{
    int const n = k.dim();
    if (t.rows() != n || t.cols() != n)
        throw InputError("linear map has wrong shape");
    if (!(std::abs(t.determinant()) > 1e-12))
        throw InputError("linear map is singular (|det T| <= 1e-12)");
    if (auto const* h = k.as<HPolytope>())
    {
        Mat const tinv_t = t.transpose().inverse();
        Mat normals = tinv_t * h->normals;
        Vec offsets = h->offsets;
        for (Eigen::Index i = 0; i < normals.cols(); ++i)
        {
            double const len = normals.col(i).norm();
            normals.col(i) /= len;
            offsets(i) /= len;
        }
        return ConvexBody::h_polytope(normals, offsets);
    }
    if (auto const* v = k.as<VPolytope>())
        return ConvexBody::v_polytope(t * v->vertices);
    if (auto const* e = k.as<Ellipsoid>())
        return ConvexBody::ellipsoid(t * e->matrix, t * e->center);
    if (auto const* b = k.as<ShiftedBall>())
        return ConvexBody::ellipsoid(b->radius * t, t * b->center);
    if (auto const* li = k.as<LinearImage>())
        return ConvexBody::linear_image(t * li->map, *li->base);
    return ConvexBody::linear_image(t, k);
}

//! K - z; throws DomainError when the origin leaves the interior.
inline ConvexBody translate(ConvexBody const& k, Vec const& z)
{
    int const n = k.dim();
    if (z.size() != n)
        throw InputError("translation has wrong dimension");
    if (auto const* h = k.as<HPolytope>())
    {
        Vec offsets = h->offsets - h->normals.transpose() * z;
        for (Eigen::Index i = 0; i < offsets.size(); ++i)
        {
            if (!(offsets(i) > 0))
                throw DomainError("translation moves the origin out of K");
        }
        return ConvexBody::h_polytope(h->normals, offsets);
    }
    if (auto const* v = k.as<VPolytope>())
        return ConvexBody::v_polytope(v->vertices.colwise() - z);
    if (auto const* e = k.as<Ellipsoid>())
        return ConvexBody::ellipsoid(e->matrix, e->center - z);
    if (auto const* b = k.as<ShiftedBall>())
        return ConvexBody::shifted_ball(b->center - z, b->radius);
    if (auto const* f = k.as<FourierBody2D>())
    {
        Vec a = f->a, b = f->b;
        if (a.size() < 2)
        {
            a.conservativeResize(2);
            b.conservativeResize(2);
            a(1) = 0;
            b(1) = 0;
        }
        a(1) -= z(0);
        b(1) -= z(1);
        return ConvexBody::fourier2d(a, b);
    }
    if (auto const* li = k.as<LinearImage>())
    {
        Vec const w = li->map.partialPivLu().solve(z);
        return ConvexBody::linear_image(li->map, translate(*li->base, w));
    }
    throw UnsupportedError("translation of a polar body");
}

//---------------------------------------------------------------------------//
// Volumes and moments
//---------------------------------------------------------------------------//

struct VolumeOptions
{
    bool monte_carlo = false;  //!< allow sampling for n >= 4 H-polytopes
    int samples = 200000;
    unsigned long long seed = 1;
};

inline double volume(ConvexBody const& k, VolumeOptions const& opts = {});

namespace detail
{
//! |(c + A B)°| for an ellipsoid containing the origin.
inline double ellipsoid_polar_volume(Mat const& a, Vec const& c)
{
    int const n = static_cast<int>(a.rows());
    double const z2 = a.partialPivLu().solve(c).squaredNorm();
    return ball_volume(n) / std::abs(a.determinant())
           / std::pow(1 - z2, 0.5 * (n + 1));
}

//! (1/n) int h^{-n} d sigma by quadrature.
inline double polar_volume_quadrature(ConvexBody const& k)
{
    auto const& g = integration_grid(k.dim());
    double s = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i)
        s += g.weights(i) * pow_pos(support_unchecked(k, g.nodes.col(i)), -k.dim());
    return s / k.dim();
}
}  // namespace detail

inline double volume(ConvexBody const& k, VolumeOptions const& opts)
{
    int const n = k.dim();
    if (auto const* g = k.geometry())
        return g->volume;
    if (auto const* h = k.as<HPolytope>())
    {
        if (!opts.monte_carlo)
            throw UnsupportedError("exact polytope volume needs n in {2,3}; "
                                   "enable the Monte Carlo option");
        // (1/n) E[rho^n] |S^{n-1}| over uniform random directions.
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> normal;
        double s = 0;
        Vec u(n);
        for (int i = 0; i < opts.samples; ++i)
        {
            for (int j = 0; j < n; ++j)
                u(j) = normal(rng);
            u.normalize();
            s += std::pow(detail::radial_unchecked(k, u), n);
        }
        (void)h;
        return sphere_area(n) * s / opts.samples / n;
    }
    if (auto const* e = k.as<Ellipsoid>())
        return std::abs(e->matrix.determinant()) * ball_volume(n);
    if (auto const* b = k.as<ShiftedBall>())
        return ball_volume(n) * std::pow(b->radius, n);
    if (auto const* f = k.as<FourierBody2D>())
    {
        double v = f->a(0) * f->a(0);
        for (Eigen::Index j = 1; j < f->a.size(); ++j)
        {
            double const kk = static_cast<double>(j * j);
            v += 0.5 * (1 - kk) * (f->a(j) * f->a(j) + f->b(j) * f->b(j));
        }
        return std::numbers::pi * v;
    }
    if (auto const* li = k.as<LinearImage>())
        return std::abs(li->map.determinant()) * volume(*li->base, opts);
    auto const& pb = std::get<PolarBody>(k.repr());
    if (auto const* e = pb.of->as<Ellipsoid>())
        return detail::ellipsoid_polar_volume(e->matrix, e->center);
    if (auto const* b = pb.of->as<ShiftedBall>())
    {
        return detail::ellipsoid_polar_volume(
            b->radius * Mat::Identity(n, n), b->center);
    }
    return detail::polar_volume_quadrature(*pb.of);
}

namespace detail
{
//! Mass, first and second moments of K° (K must contain the origin).
inline Moments polar_moments(ConvexBody const& k)
{
    int const n = k.dim();
    if (auto const* g = k.geometry())
    {
        Mat dual(n, static_cast<Eigen::Index>(g->facets.size()));
        for (std::size_t i = 0; i < g->facets.size(); ++i)
        {
            dual.col(static_cast<Eigen::Index>(i)) = g->facets[i].normal
                                                     / g->facets[i].offset;
        }
        return polytope_moments(hull_of_points(dual));
    }
    auto const& grid = integration_grid(n);
    Moments m;
    m.first = Vec::Zero(n);
    m.second = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < grid.size(); ++i)
    {
        Vec const u = grid.nodes.col(i);
        double const r = 1 / support_unchecked(k, u);
        double const w = grid.weights(i) * std::pow(r, n);
        m.mass += w / n;
        m.first += w * r / (n + 1) * u;
        m.second += w * r * r / (n + 2) * (u * u.transpose());
    }
    return m;
}
}  // namespace detail

//! Centroid of K.
inline Vec centroid(ConvexBody const& k)
{
    int const n = k.dim();
    if (auto const* g = k.geometry())
    {
        auto const m = polytope_moments(*g);
        return m.first / m.mass;
    }
    if (auto const* e = k.as<Ellipsoid>())
        return e->center;
    if (auto const* b = k.as<ShiftedBall>())
        return b->center;
    if (auto const* li = k.as<LinearImage>())
        return li->map * centroid(*li->base);
    if (auto const* f = k.as<FourierBody2D>())
    {
        // (1/3) int x(theta) h (h + h'') dtheta, exact for N > 3 K.
        int const deg = static_cast<int>(f->a.size());
        int const m = std::max(64, 4 * deg + 8);
        Vec s = Vec::Zero(2);
        for (int i = 0; i < m; ++i)
        {
            double const t = 2 * std::numbers::pi * i / m;
            auto const e = detail::fourier_eval(*f, t);
            Vec x(2);
            x << e.h * std::cos(t) - e.d1 * std::sin(t),
                e.h * std::sin(t) + e.d1 * std::cos(t);
            s += x * e.h * (e.h + e.d2);
        }
        s *= 2 * std::numbers::pi / m / 3;
        return s / volume(k);
    }
    if (k.as<PolarBody>())
    {
        auto const m = detail::polar_moments(*k.as<PolarBody>()->of);
        return m.first / m.mass;
    }
    (void)n;
    throw UnsupportedError("centroid of a polytope needs n in {2,3}");
}

//---------------------------------------------------------------------------//
/*!
 * Santalo point: the minimizer of z -> |(K - z)°|.
 *
 * Coordinate descent with golden-section line searches reaches a relative
 * objective change below 1e-8; Newton steps on the exact gradient
 * (n+1) int_{(K-z)°} y dy and Hessian (n+1)(n+2) int y y^T then polish.
 * The returned point has gradient norm <= 1e-6.
 */
inline Vec santalo_point(ConvexBody const& k)
{
    int const n = k.dim();
    if (auto const* e = k.as<Ellipsoid>())
        return e->center;
    if (auto const* b = k.as<ShiftedBall>())
        return b->center;
    if (auto const* li = k.as<LinearImage>())
        return li->map * santalo_point(*li->base);
    if (n > 3)
        throw UnsupportedError("santalo point needs n in {2,3}");

    // Moments of (K - z)°: exact for polytopes, quadrature of the support
    // function h(u) - <z, u> otherwise. Empty when z is not interior.
    auto const* grid = k.geometry() ? nullptr : &detail::integration_grid(n);
    Vec hs;
    if (grid)
    {
        hs.resize(grid->size());
        for (Eigen::Index i = 0; i < grid->size(); ++i)
            hs(i) = detail::support_unchecked(k, grid->nodes.col(i));
    }
    auto moments_at = [&](Vec const& z) -> std::optional<Moments> {
        if (!grid)
        {
            try
            {
                return detail::polar_moments(translate(k, z));
            }
            catch (DomainError const&)
            {
                return std::nullopt;
            }
        }
        Vec const hz = hs - grid->nodes.transpose() * z;
        if (!(hz.minCoeff() > 1e-8 * hz.maxCoeff()))
            return std::nullopt;
        Moments m;
        m.first = Vec::Zero(n);
        m.second = Mat::Zero(n, n);
        for (Eigen::Index i = 0; i < grid->size(); ++i)
        {
            Vec const u = grid->nodes.col(i);
            double const r = 1 / hz(i);
            double const w = grid->weights(i) * std::pow(r, n);
            m.mass += w / n;
            m.first += w * r / (n + 1) * u;
            m.second += w * r * r / (n + 2) * (u * u.transpose());
        }
        return m;
    };
    auto objective = [&](Vec const& z) {
        auto const m = moments_at(z);
        return m ? m->mass : std::numeric_limits<double>::infinity();
    };
    // Largest step t >= 0 along e keeping z + t e interior.
    auto reach = [&](Vec const& z, Vec const& e) {
        if (!grid)
            return detail::radial_unchecked(translate(k, z), e);
        double t = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < grid->size(); ++i)
        {
            double const c = grid->nodes.col(i).dot(e);
            if (c > 0)
                t = std::min(t, (hs(i) - grid->nodes.col(i).dot(z)) / c);
        }
        return t;
    };

    Vec z = Vec::Zero(n);
    double fz = objective(z);
    double const gr = 0.5 * (std::sqrt(5.0) - 1);
    for (int sweep = 0; sweep < 100; ++sweep)
    {
        double const start = fz;
        for (int j = 0; j < n; ++j)
        {
            Vec e = Vec::Zero(n);
            e(j) = 1;
            double lo = -0.99 * reach(z, -e);
            double hi = 0.99 * reach(z, e);
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = objective(z + x1 * e), f2 = objective(z + x2 * e);
            while (hi - lo > 1e-10 * (1 + z.norm()))
            {
                if (f1 < f2)
                {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = objective(z + x1 * e);
                }
                else
                {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = objective(z + x2 * e);
                }
            }
            double const t = 0.5 * (lo + hi);
            double const ft = objective(z + t * e);
            if (ft < fz)
            {
                z += t * e;
                fz = ft;
            }
        }
        if (start - fz <= 1e-8 * fz)
            break;
    }

    double gnorm = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 30; ++it)
    {
        auto const m = *moments_at(z);
        Vec const g = (n + 1) * m.first;
        gnorm = g.norm();
        if (gnorm <= 1e-12)
            break;
        Mat const hess = (n + 1) * (n + 2) * m.second;
        Vec const step = hess.ldlt().solve(g);
        double a = 1;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls, a *= 0.5)
        {
            Vec const trial = z - a * step;
            double const ft = objective(trial);
            if (ft <= fz)
            {
                z = trial;
                fz = ft;
                moved = true;
                break;
            }
        }
        if (!moved)
            break;
    }
    gnorm = ((n + 1) * moments_at(z)->first).norm();
    if (!(gnorm <= 1e-6))
    {
        throw ConvergenceError("santalo point: gradient norm "
                                   + std::to_string(gnorm) + " > 1e-6",
                               z);
    }
    return z;
}

}  // namespace geominima
