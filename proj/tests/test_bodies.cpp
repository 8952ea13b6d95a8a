#include <gtest/gtest.h>

#include <geominima/geominima.hpp>

#include "oracles.hpp"

using namespace geominima;

namespace
{
Mat square_vertices()
{
    Mat v(2, 4);
    v << 1, -1, -1, 1, 1, 1, -1, -1;
    return v;
}

std::vector<ConvexBody> sample_bodies()
{
    Mat tri(2, 3);
    tri << -1, 2, -1, -1, -1, 2;
    Mat a(2, 2);
    a << 1.5, 0.4, -0.2, 0.8;
    Vec c(2);
    c << 0.3, -0.2;
    Vec fa(4), fb(4);
    fa << 1, 0.1, 0.05, 0.02;
    fb << 0, 0.05, -0.03, 0.01;
    Mat cube_n(3, 6);
    cube_n << 1, -1, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, 0, 0, 1, -1;
    Vec zb(3);
    zb << 0.2, -0.1, 0.3;
    return {ConvexBody::v_polytope(square_vertices()),
            ConvexBody::v_polytope(tri),
            ConvexBody::ellipsoid(a, c),
            ConvexBody::fourier2d(fa, fb),
            ConvexBody::shifted_ball(c, 1.2),
            ConvexBody::h_polytope(cube_n, Vec::Constant(6, 0.7)),
            ConvexBody::shifted_ball(zb, 1),
            ConvexBody::linear_image(a, ConvexBody::fourier2d(fa, fb))};
}
}  // namespace

TEST(Grid, WeightsIntegrateLowDegreePolynomials)
{
    for (int n : {2, 3, 4})
    {
        auto const g = make_grid(n, 2000);
        EXPECT_NEAR(g.weights.sum(), sphere_area(n), 1e-9 * sphere_area(n)) << g.id;
        // int u_1^2 dsigma = |S^{n-1}| / n
        double s = 0;
        for (Eigen::Index i = 0; i < g.size(); ++i)
            s += g.weights(i) * g.nodes(0, i) * g.nodes(0, i);
        double const tol = n <= 3 ? 1e-10 : 2e-2;
        EXPECT_NEAR(s, sphere_area(n) / n, tol * sphere_area(n)) << g.id;
    }
}

TEST(Grid, RejectsTinyResolution)
{
    EXPECT_THROW(make_grid(2, 4), InputError);
    EXPECT_THROW(make_grid(1, 100), InputError);
}

TEST(Hull, PlanarAreaMatchesBruteForce)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial)
    {
        Mat pts(2, 25);
        for (Eigen::Index j = 0; j < pts.cols(); ++j)
            pts.col(j) << u(rng), u(rng);
        auto const g = hull_of_points(pts);
        EXPECT_NEAR(g.volume, oracle::brute_hull_area(pts), 1e-12);
    }
}

TEST(Hull, SpatialVolumeMatchesBruteForce)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 10; ++trial)
    {
        Mat pts(3, 18);
        for (Eigen::Index j = 0; j < pts.cols(); ++j)
            pts.col(j) << u(rng), u(rng), u(rng);
        auto const g = hull_of_points(pts);
        EXPECT_NEAR(g.volume, oracle::brute_hull_volume(pts), 1e-12);
        // Facet data satisfy the divergence identity sum a_i u_i = 0.
        Vec s = Vec::Zero(3);
        for (auto const& f : g.facets)
            s += f.area * f.normal;
        EXPECT_LT(s.norm(), 1e-12);
    }
}

TEST(Hull, CoplanarFacetsAreMerged)
{
    Mat cube(3, 8);
    int c = 0;
    for (int i : {-1, 1})
        for (int j : {-1, 1})
            for (int k : {-1, 1})
                cube.col(c++) << i, j, k;
    auto const g = hull_of_points(cube);
    EXPECT_EQ(g.facets.size(), 6u);
    EXPECT_NEAR(g.volume, 8, 1e-13);
    for (auto const& f : g.facets)
        EXPECT_NEAR(f.area, 4, 1e-13);
}

TEST(Hull, DegenerateInputsRejected)
{
    Mat line(2, 3);
    line << 0, 1, 2, 0, 1, 2;
    EXPECT_THROW(hull_of_points(line), InputError);
    Mat flat(3, 4);
    flat << 0, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0;
    EXPECT_THROW(hull_of_points(flat), InputError);
}

TEST(Hull, HalfspaceUnboundedRejected)
{
    Mat n(2, 3);
    n << 1, 0, -1, 0, 1, 0;
    EXPECT_THROW(ConvexBody::h_polytope(n, Vec::Ones(3)), InputError);
}

TEST(Bodies, SquareSupportRadialAndVolume)
{
    auto const sq = ConvexBody::v_polytope(square_vertices());
    Vec u(2);
    u << 1, 1;
    u.normalize();
    EXPECT_NEAR(support(sq, u), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(radial(sq, u), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(volume(sq), 4, 1e-15);
    EXPECT_NEAR(volume(polar(sq)), 2, 1e-15);
    EXPECT_EQ(polar(sq).kind(), "h-polytope");
}

TEST(Bodies, NonUnitDirectionRejected)
{
    auto const b = ConvexBody::ball(2);
    Vec u(2);
    u << 1, 1;
    EXPECT_THROW(support(b, u), InputError);
    EXPECT_THROW(support(b, Vec::Ones(3).normalized()), InputError);
}

TEST(Bodies, RadialTimesPolarSupportIsOne)
{
    std::mt19937_64 rng(3);
    for (auto const& k : sample_bodies())
    {
        auto const kp = polar(k);
        for (int i = 0; i < 20; ++i)
        {
            Vec const u = oracle::random_unit(rng, k.dim());
            EXPECT_NEAR(radial(k, u) * support(kp, u), 1.0, 1e-9) << k.kind();
            EXPECT_NEAR(support(polar(kp), u), support(k, u), 1e-9) << k.kind();
        }
    }
}

TEST(Bodies, FourierVolumeAndCentroidMatchQuadrature)
{
    oracle::Fourier f{{1, 0.1, 0.05, 0.02}, {0, 0.05, -0.03, 0.01}};
    Vec a(4), b(4);
    a << 1, 0.1, 0.05, 0.02;
    b << 0, 0.05, -0.03, 0.01;
    auto const k = ConvexBody::fourier2d(a, b);
    EXPECT_NEAR(volume(k), oracle::fourier_area(f), 1e-12);
    Vec const c = centroid(k);
    auto const cref = oracle::fourier_centroid(f);
    EXPECT_NEAR(c(0), cref.x(), 1e-9);
    EXPECT_NEAR(c(1), cref.y(), 1e-9);
    auto h = [&](double t) { return f.h(t); };
    EXPECT_NEAR(volume(polar(k)), oracle::polar_area_2d(h, {0, 0}), 1e-9);
}

TEST(Bodies, ShiftedEllipsePolarVolumeClosedForm)
{
    Mat a(2, 2);
    a << 1.5, 0.4, -0.2, 0.8;
    Vec c(2);
    c << 0.3, -0.2;
    auto const k = ConvexBody::ellipsoid(a, c);
    auto h = [&](double t) {
        Vec u(2);
        u << std::cos(t), std::sin(t);
        return (a.transpose() * u).norm() + c.dot(u);
    };
    EXPECT_NEAR(volume(polar(k)), oracle::polar_area_2d(h, {0, 0}), 1e-10);
}

TEST(Bodies, LinearMapScalesVolumeAndSupport)
{
    std::mt19937_64 rng(5);
    Mat t(2, 2);
    t << 1.2, 0.5, -0.3, 0.9;
    for (auto const& k : sample_bodies())
    {
        if (k.dim() != 2)
            continue;
        auto const tk = linear_map(k, t);
        EXPECT_NEAR(volume(tk), std::abs(t.determinant()) * volume(k), 1e-9 * volume(tk))
            << k.kind();
        for (int i = 0; i < 5; ++i)
        {
            Vec const u = oracle::random_unit(rng, 2);
            Vec const w = t.transpose() * u;
            EXPECT_NEAR(support(tk, u), w.norm() * support(k, w.normalized()), 1e-9)
                << k.kind();
        }
    }
    EXPECT_THROW(linear_map(ConvexBody::ball(2), Mat::Zero(2, 2)), InputError);
}

TEST(Bodies, TranslateShiftsSupport)
{
    std::mt19937_64 rng(6);
    Vec z(2);
    z << 0.1, -0.15;
    for (auto const& k : sample_bodies())
    {
        if (k.dim() != 2 || k.as<LinearImage>())
            continue;
        auto const kz = translate(k, z);
        for (int i = 0; i < 5; ++i)
        {
            Vec const u = oracle::random_unit(rng, 2);
            EXPECT_NEAR(support(kz, u), support(k, u) - z.dot(u), 1e-12) << k.kind();
        }
    }
    Vec far(2);
    far << 5, 0;
    EXPECT_THROW(translate(ConvexBody::ball(2), far), DomainError);
}

TEST(Bodies, SimplexSantaloPointIsCentroid)
{
    Mat tri(2, 3);
    tri << -1, 2, -1, -1, -1, 2;
    auto const k = ConvexBody::v_polytope(tri);
    Vec const s = santalo_point(k);
    Vec const c = centroid(k);
    EXPECT_NEAR(s(0), 0, 1e-8);
    EXPECT_NEAR(s(1), 0, 1e-8);
    EXPECT_NEAR(c(0), 0, 1e-14);
    Mat tet(3, 4);
    tet << 0.5, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1;
    auto const t3 = ConvexBody::v_polytope(tet);
    EXPECT_LT((santalo_point(t3) - centroid(t3)).norm(), 1e-7);
}

TEST(Bodies, SantaloPointIsStationaryForPolarArea)
{
    oracle::Fourier f{{1, 0.1, 0.05, 0.02}, {0, 0.05, -0.03, 0.01}};
    Vec a(4), b(4);
    a << 1, 0.1, 0.05, 0.02;
    b << 0, 0.05, -0.03, 0.01;
    Vec const s = santalo_point(ConvexBody::fourier2d(a, b));
    auto h = [&](double t) { return f.h(t); };
    double const d = 1e-4;
    Eigen::Vector2d z(s(0), s(1));
    double const f0 = oracle::polar_area_2d(h, z);
    for (int i = 0; i < 2; ++i)
    {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(i) = d;
        double const fp = oracle::polar_area_2d(h, z + e);
        double const fm = oracle::polar_area_2d(h, z - e);
        EXPECT_NEAR((fp - fm) / (2 * d), 0, 1e-7);
        EXPECT_GT(fp, f0);
        EXPECT_GT(fm, f0);
    }
}

TEST(Bodies, EllipsoidVolumeAndPolar)
{
    Mat a(3, 3);
    a << 2, 0.3, 0, 0, 1, 0.2, 0.1, 0, 0.5;
    auto const e = ConvexBody::ellipsoid(a);
    double const det = std::abs(a.determinant());
    EXPECT_NEAR(volume(e), ball_volume(3) * det, 1e-12);
    EXPECT_NEAR(volume(polar(e)), ball_volume(3) / det, 1e-12);
    EXPECT_NEAR(mahler(e), ball_volume(3) * ball_volume(3), 1e-12);
}

TEST(Bodies, InvalidConstructionsRejected)
{
    Mat n(2, 4);
    n << 1, 0, -1, 0, 0, 2, 0, -1;
    EXPECT_THROW(ConvexBody::h_polytope(n, Vec::Ones(4)), InputError);
    Mat v(2, 3);
    v << 1, 2, 3, 1, 0, 2;
    EXPECT_THROW(ConvexBody::v_polytope(v), DomainError);
    Vec a(3), b(3);
    a << 1, 0, 0.5;
    b << 0, 0, 0;
    EXPECT_THROW(ConvexBody::fourier2d(a, b), InputError);
    Vec z(2);
    z << 1.5, 0;
    EXPECT_THROW(ConvexBody::shifted_ball(z, 1), DomainError);
    EXPECT_THROW(ConvexBody::v_polytope(Mat::Random(5, 12)), UnsupportedError);
    EXPECT_THROW(ConvexBody::ellipsoid(Mat::Zero(2, 2)), InputError);
}

TEST(Bodies, HighDimensionalPolytopeVolumeIsMonteCarlo)
{
    Mat n(4, 8);
    n << Mat::Identity(4, 4), -Mat::Identity(4, 4);
    auto const cube = ConvexBody::h_polytope(n, Vec::Ones(8));
    EXPECT_THROW(volume(cube), UnsupportedError);
    VolumeOptions mc;
    mc.monte_carlo = true;
    mc.seed = 4;
    EXPECT_NEAR(volume(cube, mc), 16, 0.5);
}

TEST(Bodies, ClassifyFlags)
{
    auto const b = classify(ConvexBody::ball(2));
    EXPECT_TRUE(b.in_K0 && b.in_Kc && b.in_Ks && b.in_F0plus);
    Mat tri(2, 3);
    tri << -1, 2, -1, -1, -1, 2;
    auto const t = classify(ConvexBody::v_polytope(tri));
    EXPECT_TRUE(t.in_Kc);
    EXPECT_TRUE(t.in_Ks);
    EXPECT_FALSE(t.in_F0plus);
    Vec z(2);
    z << 0.4, 0;
    auto const s = classify(ConvexBody::shifted_ball(z, 1));
    EXPECT_FALSE(s.in_Kc);
    EXPECT_FALSE(s.in_Ks);
    EXPECT_TRUE(s.in_F0plus);
}

TEST(Random, DeterministicAndValid)
{
    for (std::string kind : {"polytope-hull", "ellipsoid", "fourier2d", "shifted-ball"})
    {
        for (int n : {2, 3})
        {
            if (kind == "fourier2d" && n == 3)
                continue;
            for (std::uint64_t seed = 0; seed < 5; ++seed)
            {
                RandomBodySpec spec{kind, n, kind == "fourier2d" ? 6 : 12, seed};
                auto const k1 = random_body(spec);
                auto const k2 = random_body(spec);
                EXPECT_EQ(body_to_json(k1).dump(), body_to_json(k2).dump());
                if (kind == "polytope-hull")
                    EXPECT_LT(centroid(k1).norm(), 1e-12);
                if (kind == "ellipsoid")
                {
                    Eigen::JacobiSVD<Mat> svd(k1.as<Ellipsoid>()->matrix);
                    auto const& sv = svd.singularValues();
                    EXPECT_LE(sv(0) / sv(n - 1), 10 + 1e-9);
                }
                if (kind == "fourier2d")
                {
                    double hmax = 0;
                    auto const [hmin, cmin] =
                        detail::fourier_extrema(*k1.as<FourierBody2D>(), hmax);
                    EXPECT_GE(cmin, 0.01 * hmin * (1 - 1e-9));
                }
            }
        }
    }
    EXPECT_THROW(random_body({"fourier2d", 3, 6, 0}), InputError);
    EXPECT_THROW(random_body({"nope", 2, 6, 0}), InputError);
}

TEST(Json, RoundTripPreservesBodies)
{
    for (auto const& k : sample_bodies())
    {
        auto const j = body_to_json(k);
        auto const back = body_from_json(j);
        EXPECT_EQ(body_to_json(back).dump(), j.dump());
        EXPECT_EQ(back.kind(), k.kind());
        EXPECT_NEAR(volume(back), volume(k), 1e-12 * volume(k));
    }
    auto const pk = polar(sample_bodies()[3]);
    EXPECT_EQ(body_to_json(body_from_json(body_to_json(pk))).dump(), body_to_json(pk).dump());
}

TEST(Json, MalformedInputRejected)
{
    EXPECT_THROW(body_from_string("{"), InputError);
    EXPECT_THROW(body_from_string(R"({"dim": 2})"), InputError);
    EXPECT_THROW(body_from_string(R"({"dim": 2, "repr": {"type": "blob"}})"), InputError);
    EXPECT_THROW(
        body_from_string(R"({"dim": 3, "repr": {"type": "shifted-ball", "center": [0,0], "radius": 1}})"),
        InputError);
    EXPECT_THROW(load_body("/nonexistent/body.json"), InputError);
}
