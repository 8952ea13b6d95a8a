// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <geominima/geominima.hpp>

using namespace geominima;

namespace
{
struct Outcome
{
    bool ok = true;
    std::string detail;
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double rel(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

std::vector<double> p_grid(int n)
{
    std::vector<double> out;
    for (double p : {-5.0, -3.0, -1.0, -0.5, 0.5, 1.0, 2.0, 5.0})
        if (std::abs(n + p) > 1e-6)
            out.push_back(p);
    return out;
}

Mat random_matrix(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> normal;
    while (true)
    {
        Mat t(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                t(i, j) = normal(rng);
        Eigen::JacobiSVD<Mat> svd(t);
        auto const& sv = svd.singularValues();
        if (sv(n - 1) > 0.1 * sv(0))
            return t;
    }
}

Mat rotation(std::mt19937_64& rng, int n)
{
    Eigen::HouseholderQR<Mat> qr(random_matrix(rng, n));
    return qr.householderQ();
}

EstimateOptions options(int restarts, std::uint64_t seed = 0)
{
    EstimateOptions o;
    o.restarts = restarts;
    o.seed = seed;
    return o;
}

//---------------------------------------------------------------------------//

Outcome ball_fixed_point()
{
    Outcome o;
    double worst = 0;
    int count = 0;
    for (int n : {2, 3})
    {
        for (double p : {-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0})
        {
            if (std::abs(n + p) < 1e-6)
                continue;
            auto const e = estimate_Gp(ConvexBody::ball(n), p, options(8));
            double const r = rel(e.value, sphere_area(n));
            worst = std::max(worst, r);
            ++count;
            if (!(r <= 1e-6))
            {
                o.ok = false;
                o.detail += " n=" + std::to_string(n) + ",p=" + fmt(p);
            }
        }
    }
    o.detail = std::to_string(count) + " cases, worst rel " + fmt(worst) + o.detail;
    return o;
}

Outcome ellipsoid_closed_form()
{
    Outcome o;
    std::mt19937_64 rng(101);
    double worst = 0;
    int count = 0;
    for (int n : {2, 3})
    {
        for (int i = 0; i < 5; ++i)
        {
            Mat const t = random_matrix(rng, n);
            auto const e = ConvexBody::ellipsoid(t);
            double const det = std::abs(t.determinant());
            for (double p : {-5.0, -1.0, 0.5, 2.0})
            {
                double const expect = sphere_area(n) * std::pow(det, (n - p) / (n + p));
                double const r = rel(estimate_Gp(e, p, options(8, i)).value, expect);
                worst = std::max(worst, r);
                ++count;
                o.ok = o.ok && r <= 1e-5;
            }
        }
    }
    o.detail = std::to_string(count) + " cases over 10 maps, worst rel " + fmt(worst);
    return o;
}

Outcome vp_exactness()
{
    Outcome o;
    double worst = 0;
    int count = 0;
    for (int i = 0; i < 50; ++i)
    {
        int const n = i < 25 ? 2 : 3;
        auto const k = random_body({"polytope-hull", n, 8 + i % 7, 500u + i});
        auto const q = random_body({"ellipsoid", n, 0, 900u + i});
        double const vol = volume(k);
        for (double p : p_grid(n))
        {
            worst = std::max(worst, rel(mixed_volume_p(k, k, p), vol));
            ++count;
        }
        worst = std::max(worst, rel(mixed_volume_p(k, q, 0), vol));
        ++count;
    }
    o.ok = worst <= 1e-12;
    o.detail = std::to_string(count) + " evaluations on 50 polytopes, worst rel "
               + fmt(worst);
    return o;
}

Outcome holder_cyclic()
{
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-6, 6), frac(0.02, 0.98);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i)
    {
        int const n = i % 2 ? 3 : 2;
        auto const k = random_body({"polytope-hull", n, 10, 1000u + i});
        auto const q = i % 3 == 0 ? random_body({"ellipsoid", n, 0, 2000u + i})
                                  : random_body({"polytope-hull", n, 9, 3000u + i});
        double s = unif(rng), t = unif(rng);
        while (std::abs(t - s) < 0.1)
            t = unif(rng);
        double const r = s + frac(rng) * (t - s);
        auto const h = holder_cyclic_check(k, q, r, s, t);
        double const m = h.margin / h.rhs;
        worst = std::min(worst, m);
        o.ok = o.ok && h.margin >= -1e-9 * h.rhs;
    }
    o.detail = "100 tuples, min margin/RHS " + fmt(worst);
    return o;
}

Outcome exact_by_construction()
{
    HarnessConfig cfg;
    cfg.checks = {"volume_product", "p_surface"};
    Evaluator ev(cfg);
    auto const rep = run_instances(build_instances(cfg), ev);
    int bad = rep.failures + rep.inconclusive + static_cast<int>(rep.errors.size());
    Outcome o;
    o.ok = bad == 0 && !rep.results.empty();
    o.detail = std::to_string(rep.results.size()) + " comparisons at 1e-12, "
               + std::to_string(bad) + " violations";
    return o;
}

Outcome shifted_ball_strictness()
{
    Outcome o;
    double least = std::numeric_limits<double>::infinity();
    int count = 0;
    for (double z : {0.1, 0.5, 0.9})
    {
        Vec z0(2);
        z0 << z * std::cos(0.3), z * std::sin(0.3);
        for (double p : {0.25, 0.5, 0.75, -0.5, -1.0, -1.5})
        {
            auto const b = gp_ball_shifted(z0, 1, p);
            least = std::min(least, b.margin);
            ++count;
            o.ok = o.ok && b.margin > 1e-8;
        }
    }
    o.detail = std::to_string(count) + " cases, least margin " + fmt(least);
    return o;
}

Outcome blaschke_santalo()
{
    Outcome o;
    int count = 0, ellipsoids = 0;
    double worst_gap = -std::numeric_limits<double>::infinity(), worst_eq = 0;
    std::vector<std::pair<std::string, int>> const kinds{
        {"polytope-hull", 2}, {"polytope-hull", 3}, {"fourier2d", 2},
        {"ellipsoid", 2},     {"ellipsoid", 3},     {"shifted-ball", 3}};
    for (int i = 0; i < 200; ++i)
    {
        auto const& [kind, n] = kinds[static_cast<std::size_t>(i) % kinds.size()];
        int const size = kind == "fourier2d" ? 6 : 12;
        auto const k = centered(random_body({kind, n, size, 7000u + i}));
        double const w = ball_volume(n);
        double const m = mahler(k);
        worst_gap = std::max(worst_gap, m - w * w);
        ++count;
        o.ok = o.ok && m <= w * w + 1e-8;
        if (kind == "ellipsoid" || kind == "shifted-ball")
        {
            worst_eq = std::max(worst_eq, rel(m, w * w));
            ++ellipsoids;
            o.ok = o.ok && rel(m, w * w) <= 1e-6;
        }
    }
    o.detail = std::to_string(count) + " bodies, max M - omega^2 = " + fmt(worst_gap)
               + ", ellipsoid equality worst rel " + fmt(worst_eq) + " over "
               + std::to_string(ellipsoids);
    return o;
}

Outcome affine_consistency()
{
    Outcome o;
    auto const& g = default_grid(2);
    double worst = 0;
    for (int i = 0; i < 20; ++i)
    {
        auto const k = random_body({"fourier2d", 2, 6, 11000u + i});
        for (double p : {-3.0, -1.0, 0.5, 1.0, 2.0})
        {
            double const a = affine_surface_area_p(k, p, &g);
            double const v = affine_surface_area_p_variational(k, p, g, 20, i).value;
            worst = std::max(worst, rel(a, v));
        }
    }
    o.ok = worst <= 1e-7;
    std::mt19937_64 rng(5);
    double worst_id = 0;
    for (int n : {2, 3})
    {
        for (int i = 0; i < 3; ++i)
        {
            auto const e = ConvexBody::ellipsoid(random_matrix(rng, n));
            for (double p : {-1.0, 0.5, 1.0, 2.0})
            {
                double const a = affine_surface_area_p(e, p);
                double const est = estimate_Gp(e, p, options(3)).value;
                double const d = curvature_image(e, p, default_grid(n)).identity_defect;
                worst_id = std::max({worst_id, rel(a, est), d});
            }
        }
    }
    o.ok = o.ok && worst_id <= 1e-6;
    o.detail = "Fourier integral vs variational worst rel " + fmt(worst)
               + "; ellipsoid identity worst rel " + fmt(worst_id);
    return o;
}

Outcome sandwich()
{
    HarnessConfig cfg;
    cfg.checks = {"sandwich"};
    cfg.random_per_kind = 4;
    Evaluator ev(cfg);
    auto const rep = run_instances(build_instances(cfg), ev);
    double worst = std::numeric_limits<double>::infinity();
    for (auto const& r : rep.results)
        worst = std::min(worst, r.relative_margin);
    Outcome o;
    int const bad = rep.failures + rep.inconclusive + static_cast<int>(rep.errors.size());
    o.ok = bad == 0 && !rep.results.empty();
    o.detail = std::to_string(rep.results.size()) + " F0+ instances, " + std::to_string(bad)
               + " violations, min relative margin " + fmt(worst);
    return o;
}

Outcome monotone_exact()
{
    Outcome o;
    std::mt19937_64 rng(13);
    std::map<std::string, int> seen;
    double worst = 0;
    int count = 0;
    for (int n : {2, 3})
    {
        std::vector<std::pair<double, double>> const pairs
            = n == 2 ? std::vector<std::pair<double, double>>{{-1, 1}, {-1.5, -0.5}, {0.5, 3},
                                                             {-5, -3}, {-3, 1}, {-5, -1}}
                     : std::vector<std::pair<double, double>>{{-2, 1}, {-2.5, -1}, {0.5, 3},
                                                             {-6, -4}, {-4, 2}, {-5, -0.5}};
        for (double det : {0.25, 1.0, 4.0})
        {
            Vec d = Vec::Ones(n);
            d(0) = 2;
            d(1) = 0.6;
            d *= std::pow(det / d.prod(), 1.0 / n);
            Mat const a = rotation(rng, n) * d.asDiagonal() * rotation(rng, n);
            auto const e = ConvexBody::ellipsoid(a);
            double const nk = n * volume(e);
            for (auto [q, p] : pairs)
            {
                std::string const regime = detail::monotone_regime(n, q, p);
                ++seen[regime];
                auto power = [&](double x) {
                    double const g = estimate_Gp(e, x, options(3)).value;
                    return std::pow(g / nk, (n + x) / x);
                };
                double const lhs = power(q), rhs = power(p);
                double const slack = 1e-9 * std::max(lhs, rhs);
                bool const holds = regime == "same_side" ? lhs <= rhs + slack
                                                         : lhs >= rhs - slack;
                // Ellipsoids sit on the equality case: both sides are det^-2.
                double const r = std::max(rel(lhs, rhs), rel(lhs, 1 / (det * det)));
                worst = std::max(worst, r);
                ++count;
                o.ok = o.ok && holds && r <= 1e-9 && !regime.empty();
            }
        }
    }
    o.ok = o.ok && seen["same_side"] > 0 && seen["opposite_sides"] > 0;
    o.detail = std::to_string(count) + " chains (" + std::to_string(seen["same_side"])
               + " same side, " + std::to_string(seen["opposite_sides"])
               + " across -n), worst rel " + fmt(worst);
    return o;
}

Outcome determinism()
{
    namespace fs = std::filesystem;
    auto const dir = fs::temp_directory_path() / "geominima_acceptance";
    fs::create_directories(dir);
    auto run = [&](char const* name) {
        auto const out = (dir / name).string();
        std::string const cmd = std::string("\"") + GEOMINIMA_CLI
                                + "\" verify --seed 2024 --out \"" + out + "\" 2>/dev/null";
        int const rc = std::system(cmd.c_str());
        std::ifstream in(out);
        std::stringstream ss;
        ss << in.rdbuf();
        return std::make_pair(rc, ss.str());
    };
    auto const a = run("first.json");
    auto const b = run("second.json");
    fs::remove_all(dir);
    Outcome o;
    o.ok = a.first == 0 && b.first == 0 && !a.second.empty() && a.second == b.second;
    o.detail = std::to_string(a.second.size()) + " bytes, "
               + (a.second == b.second ? "identical" : "different")
               + ", exit codes " + std::to_string(a.first) + "/" + std::to_string(b.first);
    return o;
}
}  // namespace

int main()
{
    std::vector<std::pair<std::string, std::function<Outcome()>>> const criteria{
        {"ball fixed point", ball_fixed_point},
        {"ellipsoid closed form", ellipsoid_closed_form},
        {"V_p exactness on polytopes", vp_exactness},
        {"Holder cyclic margins", holder_cyclic},
        {"volume-product and S_p bounds by construction", exact_by_construction},
        {"shifted ball strictness", shifted_ball_strictness},
        {"Blaschke-Santalo at body level", blaschke_santalo},
        {"as_p integral vs variational", affine_consistency},
        {"affine/geominimal sandwich", sandwich},
        {"monotonicity on ellipsoids", monotone_exact},
        {"verify determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        auto const start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (std::exception const& e)
        {
            o = {false, std::string("raised: ") + e.what()};
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now()
                                                          - start)
                                .count();
        std::printf("%s criterion %zu: %s (%s) [%.1fs]\n", o.ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
