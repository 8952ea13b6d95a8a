#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "core.hpp"

namespace geominima
{

//---------------------------------------------------------------------------//
/*!
 * One facet of a polytope in R^2 or R^3.
 *
 * Coplanar boundary pieces are merged, so outward normals are pairwise
 * distinct (angular distance at least 1e-10).
 */
struct Facet
{
    Vec normal;          //!< outward unit normal
    double offset = 0;   //!< support value h(normal), > 0 for origin-interior
    double area = 0;     //!< (n-1)-dimensional measure
};

//---------------------------------------------------------------------------//
/*!
 * Exact combinatorial description of a full-dimensional polytope, n in {2,3}.
 *
 * \c boundary lists the boundary simplices (edges in 2-D, triangles in 3-D)
 * as indices into \c vertices, oriented so that the cone from the origin over
 * each simplex has positive volume whenever the origin is interior.
 */
struct PolytopeGeometry
{
    int dim = 0;
    Mat vertices;
    std::vector<Facet> facets;
    std::vector<std::vector<int>> boundary;
    double volume = 0;  //!< (1/n) sum offset * area
};

namespace detail
{
inline double max_norm(Mat const& pts)
{
    double s = 0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        s = std::max(s, pts.col(i).norm());
    return s;
}

inline double cross2(Eigen::Vector2d const& o,
                     Eigen::Vector2d const& a,
                     Eigen::Vector2d const& b)
{
    return (a.x() - o.x()) * (b.y() - o.y())
           - (a.y() - o.y()) * (b.x() - o.x());
}

//! Andrew's monotone chain; returns counter-clockwise extreme point indices.
inline std::vector<int> hull2d_indices(Mat const& pts)
{
    int const m = static_cast<int>(pts.cols());
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (pts(0, i) != pts(0, j))
            return pts(0, i) < pts(0, j);
        return pts(1, i) < pts(1, j);
    });
    double const scale = max_norm(pts);
    double const eps = 1e-13 * scale * scale;

    auto pt = [&](int i) { return Eigen::Vector2d(pts(0, i), pts(1, i)); };
    std::vector<int> h(2 * m);
    int k = 0;
    for (int i = 0; i < m; ++i)
    {
        while (k >= 2 && cross2(pt(h[k - 2]), pt(h[k - 1]), pt(idx[i])) <= eps)
            --k;
        h[k++] = idx[i];
    }
    for (int i = m - 2, t = k + 1; i >= 0; --i)
    {
        while (k >= t && cross2(pt(h[k - 2]), pt(h[k - 1]), pt(idx[i])) <= eps)
            --k;
        h[k++] = idx[i];
    }
    h.resize(std::max(k - 1, 0));
    if (h.size() < 3)
        throw InputError("point set is not full-dimensional in R^2");
    return h;
}

struct Tri
{
    std::array<int, 3> v;
    Eigen::Vector3d n;
    double d = 0;
    bool alive = true;
};

//! Incremental 3-D hull; returns outward-oriented triangles.
inline std::vector<Tri> hull3d_triangles(Mat const& pts)
{
    int const m = static_cast<int>(pts.cols());
    if (m < 4)
        throw InputError("need at least 4 points for a 3-D hull");
    auto P = [&](int i) { return Eigen::Vector3d(pts.col(i)); };
    double const scale = max_norm(pts);
    double const eps = 1e-12 * std::max(scale, 1e-300);

    int i0 = 0;
    for (int i = 1; i < m; ++i)
        if (pts(0, i) < pts(0, i0))
            i0 = i;
    int i1 = -1;
    double best = -1;
    for (int i = 0; i < m; ++i)
    {
        double const d = (P(i) - P(i0)).norm();
        if (d > best)
            best = d, i1 = i;
    }
    Eigen::Vector3d const dir = (P(i1) - P(i0)).normalized();
    int i2 = -1;
    best = -1;
    for (int i = 0; i < m; ++i)
    {
        double const d = (P(i) - P(i0)).cross(dir).norm();
        if (d > best)
            best = d, i2 = i;
    }
    if (best <= eps)
        throw InputError("point set is collinear");
    Eigen::Vector3d const pn
        = (P(i1) - P(i0)).cross(P(i2) - P(i0)).normalized();
    int i3 = -1;
    best = -1;
    for (int i = 0; i < m; ++i)
    {
        double const d = std::abs((P(i) - P(i0)).dot(pn));
        if (d > best)
            best = d, i3 = i;
    }
    if (best <= eps)
        throw InputError("point set is not full-dimensional in R^3");

    Eigen::Vector3d const interior = 0.25 * (P(i0) + P(i1) + P(i2) + P(i3));
    std::vector<Tri> faces;
    auto add_face = [&](int a, int b, int c) {
        Eigen::Vector3d n = (P(b) - P(a)).cross(P(c) - P(a));
        if (n.dot(interior - P(a)) > 0)
        {
            std::swap(b, c);
            n = -n;
        }
        n.normalize();
        faces.push_back(Tri{{a, b, c}, n, n.dot(P(a)), true});
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (int k = 0; k < m; ++k)
    {
        if (k == i0 || k == i1 || k == i2 || k == i3)
            continue;
        Eigen::Vector3d const p = P(k);
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f)
        {
            if (faces[f].alive && faces[f].n.dot(p) - faces[f].d > eps)
                visible.push_back(f);
        }
        if (visible.empty())
            continue;
        std::set<std::pair<int, int>> edges;
        for (int f : visible)
        {
            auto const& v = faces[f].v;
            for (int e = 0; e < 3; ++e)
                edges.emplace(v[e], v[(e + 1) % 3]);
        }
        std::vector<std::pair<int, int>> horizon;
        for (auto const& [a, b] : edges)
        {
            if (!edges.count({b, a}))
                horizon.emplace_back(a, b);
        }
        for (int f : visible)
            faces[f].alive = false;
        for (auto const& [a, b] : horizon)
            add_face(a, b, k);
    }
    std::vector<Tri> out;
    for (auto& f : faces)
        if (f.alive)
            out.push_back(f);
    return out;
}

inline double tri_area(Eigen::Vector3d const& a,
                       Eigen::Vector3d const& b,
                       Eigen::Vector3d const& c)
{
    return 0.5 * (b - a).cross(c - a).norm();
}

//! Replace computed normals/offsets by given ones when they match to 1e-9.
inline void snap_facets(std::vector<Facet>& facets,
                        Mat const* normals,
                        Eigen::VectorXd const* offsets)
{
    if (!normals)
        return;
    for (auto& f : facets)
    {
        for (Eigen::Index i = 0; i < normals->cols(); ++i)
        {
            if ((normals->col(i) - f.normal).norm() < 1e-9)
            {
                f.normal = normals->col(i);
                f.offset = (*offsets)(i);
                break;
            }
        }
    }
}

inline PolytopeGeometry geometry2d(Mat const& pts,
                                   Mat const* snap_normals = nullptr,
                                   Eigen::VectorXd const* snap_offsets
                                   = nullptr)
{
    auto const idx = hull2d_indices(pts);
    int const k = static_cast<int>(idx.size());
    PolytopeGeometry g;
    g.dim = 2;
    g.vertices.resize(2, k);
    for (int i = 0; i < k; ++i)
        g.vertices.col(i) = pts.col(idx[i]);
    for (int i = 0; i < k; ++i)
    {
        int const j = (i + 1) % k;
        Eigen::Vector2d const d = g.vertices.col(j) - g.vertices.col(i);
        double const len = d.norm();
        Vec n(2);
        n << d.y() / len, -d.x() / len;
        g.facets.push_back(Facet{n, n.dot(g.vertices.col(i)), len});
        g.boundary.push_back({i, j});
    }
    snap_facets(g.facets, snap_normals, snap_offsets);
    return g;
}

inline PolytopeGeometry geometry3d(Mat const& pts,
                                   Mat const* snap_normals = nullptr,
                                   Eigen::VectorXd const* snap_offsets
                                   = nullptr)
{
    auto tris = hull3d_triangles(pts);

    // Compact the vertex set to those on the hull.
    std::vector<int> remap(pts.cols(), -1);
    std::vector<int> used;
    for (auto const& t : tris)
    {
        for (int v : t.v)
        {
            if (remap[v] < 0)
            {
                remap[v] = static_cast<int>(used.size());
                used.push_back(v);
            }
        }
    }
    PolytopeGeometry g;
    g.dim = 3;
    g.vertices.resize(3, static_cast<Eigen::Index>(used.size()));
    for (std::size_t i = 0; i < used.size(); ++i)
        g.vertices.col(static_cast<Eigen::Index>(i)) = pts.col(used[i]);

    // Merge coplanar triangles into facets.
    std::vector<int> group(tris.size(), -1);
    std::vector<double> best_area;
    for (std::size_t i = 0; i < tris.size(); ++i)
    {
        auto const& t = tris[i];
        double const area = tri_area(pts.col(t.v[0]),
                                     pts.col(t.v[1]),
                                     pts.col(t.v[2]));
        g.boundary.push_back({remap[t.v[0]], remap[t.v[1]], remap[t.v[2]]});
        int found = -1;
        for (std::size_t f = 0; f < g.facets.size(); ++f)
        {
            if ((g.facets[f].normal - Vec(t.n)).norm() < 1e-10)
            {
                found = static_cast<int>(f);
                break;
            }
        }
        if (found < 0)
        {
            g.facets.push_back(Facet{Vec(t.n), t.d, area});
            best_area.push_back(area);
        }
        else
        {
            auto& f = g.facets[found];
            f.area += area;
            if (area > best_area[found])
            {
                best_area[found] = area;
                f.normal = t.n;
                f.offset = t.d;
            }
        }
    }
    snap_facets(g.facets, snap_normals, snap_offsets);
    return g;
}

inline void finish_volume(PolytopeGeometry& g)
{
    double v = 0;
    for (auto const& f : g.facets)
        v += f.offset * f.area;
    g.volume = v / g.dim;
}
}  // namespace detail

//---------------------------------------------------------------------------//
//! Convex hull of a point set given as columns (n = 2 or 3).
inline PolytopeGeometry hull_of_points(Mat const& pts)
{
    PolytopeGeometry g;
    if (pts.rows() == 2)
        g = detail::geometry2d(pts);
    else if (pts.rows() == 3)
        g = detail::geometry3d(pts);
    else
        throw UnsupportedError("exact polytope geometry needs n in {2,3}");
    detail::finish_volume(g);
    return g;
}

//---------------------------------------------------------------------------//
/*!
 * Vertices of {x : <x, u_i> <= h_i} and the volume of its polar.
 *
 * The polar is conv{u_i / h_i}; each facet of that hull with outward normal
 * nu and offset d is dual to the vertex nu / d of the primal polytope.
 */
struct DualHull
{
    Mat primal_vertices;
    double polar_volume = 0;
};

inline DualHull dual_hull(Mat const& normals, Eigen::VectorXd const& offsets)
{
    int const n = static_cast<int>(normals.rows());
    Mat dual(n, normals.cols());
    for (Eigen::Index i = 0; i < normals.cols(); ++i)
    {
        if (!(offsets(i) > 0))
            throw DomainError("half-space offsets must be positive");
        dual.col(i) = normals.col(i) / offsets(i);
    }
    DualHull out;
    double const scale = detail::max_norm(dual);
    std::vector<Vec> verts;
    double vol = 0;
    auto push_vertex = [&](Vec const& nu, double d) {
        if (!(d > 1e-12 * scale))
            throw InputError("half-space system is unbounded (origin not "
                             "interior to the polar hull)");
        vol += d;
        verts.push_back(nu / d);
    };
    if (n == 2)
    {
        auto const idx = detail::hull2d_indices(dual);
        int const k = static_cast<int>(idx.size());
        vol = 0;
        double area = 0;
        for (int i = 0; i < k; ++i)
        {
            Eigen::Vector2d const a = dual.col(idx[i]);
            Eigen::Vector2d const b = dual.col(idx[(i + 1) % k]);
            Eigen::Vector2d const e = b - a;
            Vec nu(2);
            nu << e.y(), -e.x();
            nu /= e.norm();
            double const d = nu.dot(Vec(a));
            push_vertex(nu, d);
            area += a.x() * b.y() - a.y() * b.x();
        }
        out.polar_volume = 0.5 * area;
    }
    else if (n == 3)
    {
        auto const tris = detail::hull3d_triangles(dual);
        double v = 0;
        for (auto const& t : tris)
        {
            push_vertex(Vec(t.n), t.d);
            v += t.d
                 * detail::tri_area(dual.col(t.v[0]),
                                    dual.col(t.v[1]),
                                    dual.col(t.v[2]));
        }
        out.polar_volume = v / 3.0;
    }
    else
    {
        throw UnsupportedError("exact polytope geometry needs n in {2,3}");
    }
    out.primal_vertices.resize(n, static_cast<Eigen::Index>(verts.size()));
    for (std::size_t i = 0; i < verts.size(); ++i)
        out.primal_vertices.col(static_cast<Eigen::Index>(i)) = verts[i];
    return out;
}

//---------------------------------------------------------------------------//
//! Geometry of {x : <x, u_i> <= h_i}; facets keep the given normals/offsets.
inline PolytopeGeometry hull_of_halfspaces(Mat const& normals,
                                           Eigen::VectorXd const& offsets)
{
    auto const dh = dual_hull(normals, offsets);
    PolytopeGeometry g;
    if (normals.rows() == 2)
        g = detail::geometry2d(dh.primal_vertices, &normals, &offsets);
    else
        g = detail::geometry3d(dh.primal_vertices, &normals, &offsets);
    detail::finish_volume(g);
    return g;
}

//---------------------------------------------------------------------------//
/*!
 * Zeroth, first and second moments of a polytope from the cone
 * decomposition over its outward-oriented boundary simplices. Cone volumes
 * are signed, so the apex (the origin) need not lie inside.
 */
struct Moments
{
    double mass = 0;
    Vec first;
    Mat second;
};

inline Moments polytope_moments(PolytopeGeometry const& g)
{
    int const n = g.dim;
    Moments m;
    m.first = Vec::Zero(n);
    m.second = Mat::Zero(n, n);
    Mat simplex(n, n);
    for (auto const& s : g.boundary)
    {
        for (int j = 0; j < n; ++j)
            simplex.col(j) = g.vertices.col(s[j]);
        double const vol = simplex.determinant() / (n == 2 ? 2.0 : 6.0);
        Vec const sum = simplex.rowwise().sum();
        m.mass += vol;
        m.first += vol * sum / (n + 1);
        m.second += vol / ((n + 1) * (n + 2))
                    * (simplex * simplex.transpose() + sum * sum.transpose());
    }
    return m;
}

}  // namespace geominima
