#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "json_io.hpp"
#include "random.hpp"

namespace geominima
{

//---------------------------------------------------------------------------//
// Bracketing intervals
//---------------------------------------------------------------------------//

/*!
 * Bracket [lo, hi] for a positive quantity known only through bounds, with
 * the point value that is reported (an estimate or an exact value).
 */
struct Interval
{
    double lo = 0;
    double hi = 0;
    double point = 0;

    static Interval exact(double v) { return {v, v, v}; }
};

inline Interval operator*(Interval const& a, Interval const& b)
{
    auto mul = [](double x, double y) {
        if (x == 0 || y == 0)
            return 0.0;
        return x * y;
    };
    return {mul(a.lo, b.lo), mul(a.hi, b.hi), a.point * b.point};
}

inline Interval operator*(double c, Interval const& a)
{
    return {c * a.lo, c * a.hi, c * a.point};
}

//! Power of a positive interval; negative exponents swap the ends.
inline Interval pow(Interval const& a, double e)
{
    auto pw = [&](double x) {
        if (x == 0)
            return e > 0 ? 0.0 : std::numeric_limits<double>::infinity();
        if (std::isinf(x))
            return e > 0 ? x : 0.0;
        return pow_pos(x, e);
    };
    if (e >= 0)
        return {pw(a.lo), pw(a.hi), pw(a.point)};
    return {pw(a.hi), pw(a.lo), pw(a.point)};
}

enum class Verdict
{
    pass,
    fail,
    inconclusive,
};

inline char const* to_string(Verdict v)
{
    switch (v)
    {
        case Verdict::pass:
            return "pass";
        case Verdict::fail:
            return "fail";
        default:
            return "inconclusive";
    }
}

enum class Relation
{
    le,  //!< lhs <= rhs
    ge,  //!< lhs >= rhs
    eq,  //!< lhs == rhs
};

//---------------------------------------------------------------------------//
// Results and configuration
//---------------------------------------------------------------------------//

struct CheckResult
{
    std::string check_id;
    std::string clause;
    std::string instance_id;
    Json instance;  //!< {"check_id", "body", "params"}: enough to replay
    double lhs = 0;
    double rhs = 0;
    double margin = 0;           //!< positive when the relation holds
    double relative_margin = 0;  //!< margin / max(|lhs|, |rhs|)
    double tolerance = 0;
    Verdict verdict = Verdict::pass;
    std::string note;
};

/*!
 * Decide a relation between two bracketed quantities.
 *
 * The verdict is \c pass when the relation holds for every value in the
 * brackets, \c fail when it fails for every value, and \c inconclusive
 * otherwise. Equalities pass when the point values agree within tolerance.
 */
inline CheckResult
compare(Interval const& a, Relation rel, Interval const& b, double tol)
{
    CheckResult r;
    r.lhs = a.point;
    r.rhs = b.point;
    r.tolerance = tol;
    double const scale = std::max(std::abs(a.point), std::abs(b.point));
    double const slack = tol * scale;
    switch (rel)
    {
        case Relation::le:
            r.margin = b.point - a.point;
            if (a.hi <= b.lo + slack)
                r.verdict = Verdict::pass;
            else if (a.lo > b.hi + slack)
                r.verdict = Verdict::fail;
            else
                r.verdict = Verdict::inconclusive;
            break;
        case Relation::ge:
            r.margin = a.point - b.point;
            if (a.lo >= b.hi - slack)
                r.verdict = Verdict::pass;
            else if (a.hi < b.lo - slack)
                r.verdict = Verdict::fail;
            else
                r.verdict = Verdict::inconclusive;
            break;
        case Relation::eq:
            r.margin = -std::abs(a.point - b.point);
            if (std::abs(a.point - b.point) <= slack)
                r.verdict = Verdict::pass;
            else if (a.lo > b.hi + slack || b.lo > a.hi + slack)
                r.verdict = Verdict::fail;
            else
                r.verdict = Verdict::inconclusive;
            break;
    }
    r.relative_margin = scale > 0 ? r.margin / scale : 0.0;
    if (std::isnan(r.margin))
        r.verdict = Verdict::inconclusive;
    return r;
}

struct Tolerances
{
    double exact = 1e-9;
    double quadrature = 1e-6;
    double estimator = 1e-4;
};

struct HarnessConfig
{
    std::uint64_t seed = 2024;
    int random_per_kind = 2;
    std::vector<int> dims{2, 3};
    std::vector<double> p_grid{-5, -3, -1, -0.5, 0.5, 1, 2, 5};
    double bm_constant = 0.5;
    Tolerances tol;
    std::vector<std::string> checks;  //!< empty runs every check
    int grid_2d = 512;
    int grid_3d = 1024;
    int restarts = 3;
    int max_evals = 1500;
    int threads = 0;  //!< 0: hardware concurrency, capped by GEOMINIMA_THREADS
};

//! Check identifiers, in report order.
inline std::vector<std::string> const& all_checks()
{
    static std::vector<std::string> const ids{
        "ball_fixed_point",  "ellipsoid_closed_form", "vp_exactness",
        "homogeneity",       "translation_balls",     "volume_product",
        "p_surface",         "blaschke_santalo",      "santalo_style",
        "isoperimetric",     "containment",           "cyclic",
        "sandwich",          "variational",           "affine_geominimal",
        "vp_membership",
    };
    return ids;
}

inline Json config_to_json(HarnessConfig const& c)
{
    Json j;
    j["seed"] = c.seed;
    j["random_per_kind"] = c.random_per_kind;
    j["dims"] = c.dims;
    j["p_grid"] = c.p_grid;
    j["bm_constant"] = c.bm_constant;
    j["tolerances"] = {{"exact", c.tol.exact},
                       {"quadrature", c.tol.quadrature},
                       {"estimator", c.tol.estimator}};
    j["checks"] = c.checks.empty() ? all_checks() : c.checks;
    j["grid_2d"] = c.grid_2d;
    j["grid_3d"] = c.grid_3d;
    j["restarts"] = c.restarts;
    j["max_evals"] = c.max_evals;
    return j;
}

//! Parse a config object; unknown keys and invalid values raise InputError.
inline HarnessConfig config_from_json(Json const& j)
{
    if (!j.is_object())
        throw InputError("harness config must be a JSON object");
    HarnessConfig c;
    auto num = [&](Json const& v, char const* key) {
        if (!v.is_number())
            throw InputError(std::string("config '") + key + "' must be a number");
        return v.get<double>();
    };
    auto integer = [&](Json const& v, char const* key) {
        if (!v.is_number_integer())
            throw InputError(std::string("config '") + key + "' must be an integer");
        return v.get<long long>();
    };
    for (auto const& [key, v] : j.items())
    {
        if (key == "seed")
            c.seed = static_cast<std::uint64_t>(integer(v, "seed"));
        else if (key == "random_per_kind")
            c.random_per_kind = static_cast<int>(integer(v, "random_per_kind"));
        else if (key == "dims")
        {
            if (!v.is_array())
                throw InputError("config 'dims' must be a list");
            c.dims.clear();
            for (auto const& d : v)
                c.dims.push_back(static_cast<int>(integer(d, "dims")));
        }
        else if (key == "p_grid")
        {
            if (!v.is_array())
                throw InputError("config 'p_grid' must be a list");
            c.p_grid.clear();
            for (auto const& p : v)
                c.p_grid.push_back(num(p, "p_grid"));
        }
        else if (key == "bm_constant")
            c.bm_constant = num(v, "bm_constant");
        else if (key == "tolerances")
        {
            if (!v.is_object())
                throw InputError("config 'tolerances' must be an object");
            for (auto const& [tk, tv] : v.items())
            {
                if (tk == "exact")
                    c.tol.exact = num(tv, "exact");
                else if (tk == "quadrature")
                    c.tol.quadrature = num(tv, "quadrature");
                else if (tk == "estimator")
                    c.tol.estimator = num(tv, "estimator");
                else
                    throw InputError("unknown tolerance '" + tk + "'");
            }
        }
        else if (key == "checks")
        {
            if (!v.is_array())
                throw InputError("config 'checks' must be a list");
            c.checks.clear();
            for (auto const& s : v)
            {
                if (!s.is_string())
                    throw InputError("config 'checks' must list strings");
                c.checks.push_back(s.get<std::string>());
            }
        }
        else if (key == "grid_2d")
            c.grid_2d = static_cast<int>(integer(v, "grid_2d"));
        else if (key == "grid_3d")
            c.grid_3d = static_cast<int>(integer(v, "grid_3d"));
        else if (key == "restarts")
            c.restarts = static_cast<int>(integer(v, "restarts"));
        else if (key == "max_evals")
            c.max_evals = static_cast<int>(integer(v, "max_evals"));
        else if (key == "threads")
            c.threads = static_cast<int>(integer(v, "threads"));
        else
            throw InputError("unknown config key '" + key + "'");
    }
    if (!(c.bm_constant > 0 && c.bm_constant <= 1))
        throw InputError("bm_constant must lie in (0, 1]");
    for (int d : c.dims)
        if (d != 2 && d != 3)
            throw InputError("harness dims must be 2 or 3");
    for (auto const& id : c.checks)
    {
        auto const& all = all_checks();
        if (std::find(all.begin(), all.end(), id) == all.end())
            throw InputError("unknown check '" + id + "'");
    }
    if (c.random_per_kind < 0 || c.restarts < 1 || c.grid_2d < 8 || c.grid_3d < 8)
        throw InputError("config counts out of range");
    return c;
}

//---------------------------------------------------------------------------//
// Evaluation context
//---------------------------------------------------------------------------//

namespace detail
{
inline std::uint64_t fnv1a(std::string const& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s)
    {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t double_bits(double x)
{
    std::uint64_t u = 0;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

inline bool centered_ellipsoid(ConvexBody const& k)
{
    if (auto const* e = k.as<Ellipsoid>())
        return e->center.isZero(0);
    if (auto const* b = k.as<ShiftedBall>())
        return b->center.isZero(0);
    return false;
}

inline std::string fmt_num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}
}  // namespace detail

/*!
 * Shared, memoized evaluation state for one harness run.
 *
 * Estimates are keyed by the body's JSON and p; seeds derive from the same
 * key, so a replayed instance reproduces its estimate exactly.
 */
class Evaluator
{
  public:
    explicit Evaluator(HarnessConfig cfg)
        : cfg_(std::move(cfg))
        , grid2_(make_grid(2, cfg_.grid_2d))
        , grid3_(make_grid(3, cfg_.grid_3d))
    {
    }

    HarnessConfig const& config() const { return cfg_; }

    SphericalGrid const& grid(int n) const
    {
        if (n == 2)
            return grid2_;
        if (n == 3)
            return grid3_;
        throw UnsupportedError("harness supports n in {2,3}");
    }

    GpEstimate estimate(ConvexBody const& k, double p)
    {
        std::string const key = body_to_json(k).dump() + "|" + detail::fmt_num(p)
                                + "|" + std::to_string(detail::double_bits(p));
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end())
                return it->second;
        }
        EstimateOptions opts;
        opts.restarts = cfg_.restarts;
        opts.max_evals = cfg_.max_evals;
        opts.seed = derive_seed(cfg_.seed, detail::fnv1a(key));
        opts.grid = &grid(k.dim());
        auto est = estimate_Gp(k, p, opts);
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.emplace(key, std::move(est)).first->second;
    }

    double as_p(ConvexBody const& k, double p)
    {
        return affine_surface_area_p(k, p, &grid(k.dim()));
    }

    //! Bracket for G_p(K): exact, or the estimate with the as_p side.
    Interval gtilde(ConvexBody const& k, double p)
    {
        int const n = k.dim();
        if (p == 0)
            return Interval::exact(n * volume(k));
        if (detail::centered_ellipsoid(k))
        {
            double const det = k.as<Ellipsoid>()
                                   ? std::abs(k.as<Ellipsoid>()->matrix.determinant())
                                   : std::pow(k.as<ShiftedBall>()->radius, n);
            return Interval::exact(sphere_area(n) * pow_pos(det, (n - p) / (n + p)));
        }
        auto const est = estimate(k, p);
        bool const f0 = in_F0plus(k);
        double const inf = std::numeric_limits<double>::infinity();
        Interval iv;
        iv.point = est.value;
        if (p > 0)
        {
            iv.hi = est.value;
            iv.lo = f0 ? std::min(as_p(k, p), est.value) : 0.0;
        }
        else
        {
            iv.lo = est.value;
            iv.hi = f0 ? std::max(as_p(k, p), est.value) : inf;
        }
        return iv;
    }

  private:
    HarnessConfig cfg_;
    SphericalGrid grid2_, grid3_;
    std::mutex mutex_;
    std::map<std::string, GpEstimate> cache_;
};

//---------------------------------------------------------------------------//
// Body sets
//---------------------------------------------------------------------------//

struct NamedBody
{
    std::string name;
    ConvexBody body;
};

//! Fixed, versioned canonical list ("canonical-v1").
inline std::vector<NamedBody> canonical_bodies(int n)
{
    std::vector<NamedBody> out;
    if (n == 2)
    {
        Mat sq(2, 4), cross(2, 4), tri(2, 3), a(2, 2), g(2, 2);
        sq << 1, -1, -1, 1, 1, 1, -1, -1;
        cross << 1, 0, -1, 0, 0, 1, 0, -1;
        tri << -1, 2, -1, -1, -1, 2;
        a << 2, 0, 0, 1;
        g << 1.5, 0.4, -0.2, 0.8;
        Vec z(2);
        z << 0.5, 0;
        out.push_back({"ball2", ConvexBody::ball(2)});
        out.push_back({"square", ConvexBody::v_polytope(sq)});
        out.push_back({"cross2", ConvexBody::v_polytope(cross)});
        out.push_back({"triangle", ConvexBody::v_polytope(tri)});
        out.push_back({"ellipse-2x1", ConvexBody::ellipsoid(a)});
        out.push_back({"ellipse-general", ConvexBody::ellipsoid(g)});
        out.push_back({"shifted-ball2", ConvexBody::shifted_ball(z, 1)});
    }
    else if (n == 3)
    {
        Mat cube(3, 8), oct(3, 6), tet(3, 4);
        int c = 0;
        for (int i : {-1, 1})
            for (int j : {-1, 1})
                for (int k : {-1, 1})
                    cube.col(c++) << i, j, k;
        oct << 1, -1, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, 0, 0, 1, -1;
        tet << 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1;
        double const t = 0.5;
        Mat rot(3, 3);
        rot << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
        Vec d(3);
        d << 2, 1, 0.5;
        Vec z(3);
        z << 0.3, 0.2, 0;
        out.push_back({"ball3", ConvexBody::ball(3)});
        out.push_back({"cube", ConvexBody::v_polytope(cube)});
        out.push_back({"octahedron", ConvexBody::v_polytope(oct)});
        out.push_back({"tetrahedron", ConvexBody::v_polytope(tet)});
        out.push_back({"ellipsoid-3",
                       ConvexBody::ellipsoid(rot * d.asDiagonal() * rot.transpose())});
        out.push_back({"shifted-ball3", ConvexBody::shifted_ball(z, 1)});
    }
    return out;
}

inline std::vector<NamedBody> random_bodies(HarnessConfig const& cfg, int n)
{
    std::vector<NamedBody> out;
    std::vector<std::string> kinds{"polytope-hull", "ellipsoid", "shifted-ball"};
    if (n == 2)
        kinds.push_back("fourier2d");
    for (std::size_t k = 0; k < kinds.size(); ++k)
    {
        for (int i = 0; i < cfg.random_per_kind; ++i)
        {
            RandomBodySpec spec;
            spec.kind = kinds[k];
            spec.dim = n;
            spec.size = kinds[k] == "fourier2d" ? 6 : (n == 2 ? 10 : 12);
            spec.seed = derive_seed(cfg.seed, 1000 + 10 * n + k,
                                    static_cast<std::uint64_t>(i));
            out.push_back({"random-" + kinds[k] + std::to_string(n) + "-"
                               + std::to_string(i),
                           random_body(spec)});
        }
    }
    return out;
}

//! K translated so its centroid is the origin (unchanged when already so).
inline ConvexBody centered(ConvexBody const& k)
{
    Vec const c = centroid(k);
    double const scale = 1.0 / std::max(1e-300, detail::support_unchecked(k, Vec::Unit(k.dim(), 0)));
    if (c.norm() * scale <= 1e-14)
        return k;
    return translate(k, c);
}

//---------------------------------------------------------------------------//
// Checks
//---------------------------------------------------------------------------//

namespace detail
{
inline Json instance_json(std::string const& check_id,
                          ConvexBody const& k,
                          Json params)
{
    Json j;
    j["check_id"] = check_id;
    j["body"] = body_to_json(k);
    j["params"] = std::move(params);
    return j;
}

inline double param(Json const& params, char const* key)
{
    if (!params.contains(key) || !params.at(key).is_number())
        throw InputError(std::string("instance parameter '") + key + "' missing");
    return params.at(key).get<double>();
}

inline std::string param_str(Json const& params, char const* key)
{
    if (!params.contains(key) || !params.at(key).is_string())
        throw InputError(std::string("instance parameter '") + key + "' missing");
    return params.at(key).get<std::string>();
}

struct CheckContext
{
    Evaluator& ev;
    std::string check_id;
    std::string instance_id;
    Json instance;
    std::vector<CheckResult> out;

    void add(CheckResult r, std::string clause, std::string note = {})
    {
        r.check_id = check_id;
        r.clause = std::move(clause);
        r.instance_id = instance_id;
        r.instance = instance;
        r.note = std::move(note);
        out.push_back(std::move(r));
    }
};

inline double omega_ratio(double v, int n)
{
    return v / ball_volume(n);
}

//! Regime label for a cyclic (r, s, t) tuple; empty when no clause applies.
inline std::string cyclic_regime(int n, double r, double s, double t)
{
    double const m = -n;
    auto lt = [](std::initializer_list<double> xs) {
        return std::is_sorted(xs.begin(), xs.end(), std::less_equal<double>())
               && std::adjacent_find(xs.begin(), xs.end()) == xs.end();
    };
    if (lt({m, t, 0, r, s}) || lt({m, s, 0, r, t}))
        return "mixed_sign";
    if (lt({m, t, r, s, 0}) || lt({m, s, r, t, 0}))
        return "negative_above_minus_n";
    if (lt({t, r, m, s, 0}) || lt({s, r, m, t, 0}))
        return "straddling_minus_n";
    return {};
}

inline std::string monotone_regime(int n, double q, double p)
{
    double const m = -n;
    if (q == 0 || p == 0)
        return {};
    if ((m < q && q < p) || (q < p && p < m))
        return "same_side";
    if (q < m && m < p)
        return "opposite_sides";
    return {};
}
}  // namespace detail

/*!
 * Evaluate one check instance. \c params carries the instance parameters
 * (p, q, r, s, t, z0, T, ...); every clause yields one CheckResult.
 */
inline std::vector<CheckResult> run_check(std::string const& check_id,
                                          std::string const& instance_id,
                                          ConvexBody const& k,
                                          Json const& params,
                                          Evaluator& ev)
{
    using detail::param;
    int const n = k.dim();
    auto const& cfg = ev.config();
    auto const& tol = cfg.tol;
    double const nw = sphere_area(n);
    double const omega = ball_volume(n);
    detail::CheckContext ctx{ev, check_id, instance_id,
                             detail::instance_json(check_id, k, params), {}};
    auto est_interval = [&](ConvexBody const& b, double p) {
        return ev.gtilde(b, p);
    };

    if (check_id == "ball_fixed_point")
    {
        double const p = param(params, "p");
        auto const e = ev.estimate(k, p);
        double const r = k.as<ShiftedBall>()->radius;
        double const expect = nw * std::pow(r, n * (n - p) / (n + p));
        ctx.add(compare(Interval::exact(e.value), Relation::eq,
                        Interval::exact(expect), tol.quadrature),
                "estimate_equals_n_omega");
    }
    else if (check_id == "ellipsoid_closed_form")
    {
        double const p = param(params, "p");
        auto const e = ev.estimate(k, p);
        double const det = std::abs(k.as<Ellipsoid>()->matrix.determinant());
        ctx.add(compare(Interval::exact(e.value), Relation::eq,
                        Interval::exact(nw * pow_pos(det, (n - p) / (n + p))),
                        tol.estimator),
                "estimate_equals_closed_form");
    }
    else if (check_id == "vp_exactness")
    {
        double const p = param(params, "p");
        double const vol = volume(k);
        auto const& g = ev.grid(n);
        ctx.add(compare(Interval::exact(mixed_volume_p(k, k, p, &g)), Relation::eq,
                        Interval::exact(vol), 1e-12),
                "self_mixed_volume");
        auto const q = ConvexBody::ball(n, 1.5);
        ctx.add(compare(Interval::exact(mixed_volume_p(k, q, 0.0, &g)), Relation::eq,
                        Interval::exact(vol), 1e-12),
                "zero_order_mixed_volume");
    }
    else if (check_id == "homogeneity")
    {
        double const p = param(params, "p");
        Mat const t = detail::json_to_mat(params.at("T"), "T", false);
        auto const tk = linear_map(k, t);
        double const factor = pow_pos(std::abs(t.determinant()), (n - p) / (n + p));
        ctx.add(compare(est_interval(tk, p), Relation::eq,
                        factor * est_interval(k, p), tol.estimator),
                "linear_map");
    }
    else if (check_id == "translation_balls")
    {
        double const p = param(params, "p");
        Vec const z0 = detail::json_to_vec(params.at("z0"), "z0");
        auto const b = gp_ball_shifted(z0, 1.0, p, &ev.grid(n));
        CheckResult r;
        r.lhs = p > 0 ? b.value : b.threshold;
        r.rhs = p > 0 ? b.threshold : b.value;
        r.margin = b.margin;
        r.relative_margin = b.margin / b.threshold;
        r.tolerance = 1e-8;
        r.verdict = b.margin > 1e-8 ? Verdict::pass : Verdict::fail;
        ctx.add(r, p > 0 ? "ball_bound_below_centered" : "ball_bound_above_centered");
    }
    else if (check_id == "volume_product")
    {
        double const p = param(params, "p");
        auto const e = ev.estimate(k, p);
        auto const kp = polar(k);
        auto const ep = ev.estimate(kp, p);
        Relation const rel = p >= 0 ? Relation::le : Relation::ge;
        ctx.add(compare(Interval::exact(e.value), rel,
                        Interval::exact(e.objective_at_K), 1e-12),
                "estimate_vs_volume_product_form");
        double const m = volume(k) * volume(kp);
        ctx.add(compare(Interval::exact(e.value * ep.value), rel,
                        Interval::exact(n * n * m), 1e-12),
                "product_vs_mahler");
    }
    else if (check_id == "p_surface")
    {
        double const p = param(params, "p");
        auto const e = ev.estimate(k, p);
        double const sp = p_surface_area(k, p, &ev.grid(n));
        Relation const rel = p >= 0 ? Relation::le : Relation::ge;
        ctx.add(compare(Interval::exact(e.value / nw), rel,
                        Interval::exact(pow_pos(sp / nw, n / (n + p))), 1e-12),
                "estimate_vs_p_surface_area");
    }
    else if (check_id == "blaschke_santalo")
    {
        std::string const norm = detail::param_str(params, "normalization");
        ConvexBody const kn = norm == "santalo" ? translate(k, santalo_point(k)) : centered(k);
        double const m = mahler(kn);
        ctx.add(compare(Interval::exact(m), Relation::le,
                        Interval::exact(omega * omega), 1e-8 / (omega * omega)),
                "mahler_at_most_ball");
        if (detail::centered_ellipsoid(kn))
        {
            ctx.add(compare(Interval::exact(m), Relation::eq,
                            Interval::exact(omega * omega), 1e-6),
                    "ellipsoid_equality");
        }
    }
    else if (check_id == "santalo_style")
    {
        double const p = param(params, "p");
        auto const kp = polar(k);
        Interval const prod = est_interval(k, p) * est_interval(kp, p);
        if (p >= 0)
        {
            ctx.add(compare(prod, Relation::le, Interval::exact(nw * nw), tol.estimator),
                    "product_at_most_ball");
            if (detail::centered_ellipsoid(k))
            {
                ctx.add(compare(prod, Relation::eq, Interval::exact(nw * nw),
                                tol.estimator),
                        "ellipsoid_equality");
            }
        }
        else
        {
            double const c = cfg.bm_constant;
            ctx.add(compare(prod, Relation::ge,
                            Interval::exact(std::pow(c, n) * nw * nw), tol.estimator),
                    "product_at_least_bm");
            // The lower bound rests on M(K) >= c^n omega^2; test it directly.
            ctx.add(compare(Interval::exact(mahler(k)), Relation::ge,
                            Interval::exact(std::pow(c, n) * omega * omega),
                            tol.exact),
                    "bm_premise");
        }
    }
    else if (check_id == "isoperimetric")
    {
        double const p = param(params, "p");
        std::string const variant = detail::param_str(params, "variant");
        Interval const ratio = (1.0 / nw) * est_interval(k, p);
        double const vk = detail::omega_ratio(volume(k), n);
        double const e = (n - p) / (n + p);
        bool const ell = detail::centered_ellipsoid(k);
        auto add_eq = [&](Interval const& rhs, char const* clause) {
            if (ell)
                ctx.add(compare(ratio, Relation::eq, rhs, tol.estimator), clause);
        };
        if (variant == "uncentered")
        {
            Interval const rhs = Interval::exact(pow_pos(vk, e));
            if (p > 0 && p < 1)
                ctx.add(compare(ratio, Relation::le, rhs, tol.estimator),
                        "volume_form_upper");
            else if (p < 0 && p > -n)
                ctx.add(compare(ratio, Relation::ge, rhs, tol.estimator),
                        "volume_form_lower");
            else
                throw InputError("uncentered isoperimetric needs p in (-n,0) or (0,1)");
        }
        else
        {
            double const vp = detail::omega_ratio(volume(polar(k)), n);
            Interval const vol_form = Interval::exact(pow_pos(vk, e));
            Interval const polar_form = Interval::exact(pow_pos(vp, (p - n) / (n + p)));
            if (p > 0)
            {
                ctx.add(compare(ratio, Relation::le, vol_form, tol.estimator),
                        "volume_form_upper");
                ctx.add(compare(ratio, Relation::le, polar_form, tol.estimator),
                        "polar_form_upper");
                add_eq(vol_form, "ellipsoid_equality");
            }
            else if (p > -n)
            {
                ctx.add(compare(ratio, Relation::ge, vol_form, tol.estimator),
                        "volume_form_lower");
                add_eq(vol_form, "ellipsoid_equality");
            }
            else
            {
                ctx.add(compare(ratio, Relation::ge, polar_form, tol.estimator),
                        "polar_form_lower");
                double const c = cfg.bm_constant;
                ctx.add(compare(ratio, Relation::ge,
                                Interval::exact(pow_pos(c, n * p / (n + p)) * pow_pos(vk, e)),
                                tol.estimator),
                        "bm_volume_form_lower");
                add_eq(polar_form, "ellipsoid_equality");
            }
        }
    }
    else if (check_id == "containment")
    {
        double const p = param(params, "p");
        double const radius = param(params, "radius");
        std::string const role = detail::param_str(params, "role");
        // Support dominance on the grid (exact at vertices for polytopes).
        auto const& g = ev.grid(n);
        bool ok = true;
        for (Eigen::Index i = 0; i < g.size() && ok; ++i)
        {
            double const h = detail::support_unchecked(k, g.nodes.col(i));
            ok = role == "K_in_E" ? h <= radius : h >= radius;
        }
        if (auto const* geo = k.geometry())
        {
            for (auto const& f : geo->facets)
                ok = ok && (role == "K_in_E" || f.offset >= radius);
            for (Eigen::Index j = 0; j < geo->vertices.cols(); ++j)
                ok = ok && (role != "K_in_E" || geo->vertices.col(j).norm() <= radius);
        }
        if (!ok)
            throw InputError("containment is not satisfied");
        Interval const ge = Interval::exact(nw * pow_pos(radius, n * (n - p) / (n + p)));
        Interval const gk = est_interval(k, p);
        if (p > 0 && p < n && role == "K_in_E")
            ctx.add(compare(gk, Relation::le, ge, tol.estimator), "inside_small_p");
        else if (p > n && role == "E_in_K")
            ctx.add(compare(gk, Relation::le, ge, tol.estimator), "contains_large_p");
        else if (p < 0 && p > -n && role == "E_in_K")
            ctx.add(compare(gk, Relation::ge, ge, tol.estimator), "contains_negative_p");
        else if (p < -n && role == "K_in_E")
            ctx.add(compare(gk, Relation::ge, ge, tol.estimator), "inside_below_minus_n");
        else
            throw InputError("containment role does not match the p regime");
    }
    else if (check_id == "cyclic")
    {
        std::string const kind = detail::param_str(params, "kind");
        bool const exact_tier = detail::centered_ellipsoid(k);
        double const ctol = exact_tier ? tol.exact : tol.estimator;
        if (kind == "holder")
        {
            double const r = param(params, "r"), s = param(params, "s"),
                         t = param(params, "t");
            auto const q = body_from_json(params.at("Q"));
            auto const h = holder_cyclic_check(k, q, r, s, t, &ev.grid(n));
            CheckResult res;
            res.lhs = h.lhs;
            res.rhs = h.rhs;
            res.margin = h.margin;
            res.relative_margin = h.margin / h.rhs;
            res.tolerance = 1e-9;
            res.verdict = h.margin >= -1e-9 * h.rhs ? Verdict::pass : Verdict::fail;
            ctx.add(res, "holder_mixed_volume");
        }
        else if (kind == "three_term")
        {
            double const r = param(params, "r"), s = param(params, "s"),
                         t = param(params, "t");
            std::string const regime = detail::cyclic_regime(n, r, s, t);
            if (regime.empty())
                throw InputError("(r, s, t) matches no cyclic regime");
            double const a = (r - s) * (n + t) / ((t - s) * (n + r));
            double const b = (t - r) * (n + s) / ((t - s) * (n + r));
            Interval const rhs = pow(est_interval(k, t), a) * pow(est_interval(k, s), b);
            Relation const rel = regime == "straddling_minus_n" ? Relation::ge : Relation::le;
            ctx.add(compare(est_interval(k, r), rel, rhs, ctol), regime);
        }
        else if (kind == "monotone")
        {
            double const q = param(params, "q"), p = param(params, "p");
            std::string const regime = detail::monotone_regime(n, q, p);
            if (regime.empty())
                throw InputError("(q, p) matches no monotonicity regime");
            double const nk = n * volume(k);
            Interval const lhs = pow((1.0 / nk) * est_interval(k, q), (n + q) / q);
            Interval const rhs = pow((1.0 / nk) * est_interval(k, p), (n + p) / p);
            ctx.add(compare(lhs, regime == "same_side" ? Relation::le : Relation::ge,
                            rhs, ctol),
                    regime);
        }
        else
        {
            throw InputError("unknown cyclic kind '" + kind + "'");
        }
    }
    else if (check_id == "sandwich")
    {
        double const p = param(params, "p");
        auto const e = ev.estimate(k, p);
        double const a = ev.as_p(k, p);
        ctx.add(compare(Interval::exact(e.value), p > 0 ? Relation::ge : Relation::le,
                        Interval::exact(a), tol.quadrature),
                p > 0 ? "affine_below_estimate" : "affine_above_estimate");
    }
    else if (check_id == "variational")
    {
        double const p = param(params, "p");
        auto const& g = ev.grid(n);
        auto const v = affine_surface_area_p_variational(k, p, g, 100,
                                                         derive_seed(cfg.seed, 77));
        double const a = affine_surface_area_p(k, p, &g);
        ctx.add(compare(Interval::exact(v.value), Relation::eq, Interval::exact(a), 1e-7),
                "integral_equals_variational");
        CheckResult trial;
        trial.lhs = v.value;
        trial.rhs = v.value + v.trial_margin;
        trial.margin = v.trial_margin;
        trial.relative_margin = v.trial_margin / v.value;
        trial.tolerance = 1e-12;
        trial.verdict = v.trial_margin >= -1e-12 * v.value ? Verdict::pass : Verdict::fail;
        ctx.add(trial, "optimizer_extremal_among_trials");
        auto const ci = curvature_image(k, p, g);
        ctx.add(compare(Interval::exact(ci.body.volume()), Relation::eq,
                        Interval::exact(ci.lambda), 1e-8),
                "curvature_image_volume");
    }
    else if (check_id == "affine_geominimal")
    {
        double const p = param(params, "p");
        auto const& g = ev.grid(n);
        double const a = affine_surface_area_p(k, p, &g);
        ctx.add(compare(Interval::exact(ev.estimate(k, p).value), Relation::eq,
                        Interval::exact(a), tol.quadrature),
                "geominimal_equals_affine");
        auto const ci = curvature_image(k, p, g);
        CheckResult id;
        id.lhs = ci.identity_defect;
        id.rhs = 0;
        id.margin = -ci.identity_defect;
        id.relative_margin = -ci.identity_defect;
        id.tolerance = tol.quadrature;
        id.verdict = ci.identity_defect <= tol.quadrature ? Verdict::pass : Verdict::fail;
        ctx.add(id, "curvature_image_identity");
    }
    else if (check_id == "vp_membership")
    {
        double const p = param(params, "p");
        auto const& g = ev.grid(n);
        auto const mem = in_Vp(k, p, g);
        CheckResult r;
        r.tolerance = 1e-8;
        if (n == 2)
        {
            bool const convex = is_convex(curvature_image(k, p, g).body);
            r.lhs = mem.member ? 1 : 0;
            r.rhs = convex ? 1 : 0;
            r.margin = mem.member == convex ? 0 : -1;
            r.verdict = mem.member == convex ? Verdict::pass : Verdict::fail;
            ctx.add(r, "membership_matches_image_convexity");
        }
        if (detail::centered_ellipsoid(k))
        {
            CheckResult m;
            m.lhs = mem.member ? 1 : 0;
            m.rhs = 1;
            m.margin = mem.member ? 0 : -1;
            m.verdict = mem.member ? Verdict::pass : Verdict::fail;
            ctx.add(m, "ellipsoid_is_member");
        }
    }
    else
    {
        throw InputError("unknown check '" + check_id + "'");
    }
    return std::move(ctx.out);
}

//---------------------------------------------------------------------------//
// Suite
//---------------------------------------------------------------------------//

struct InstanceSpec
{
    std::string check_id;
    std::string instance_id;
    ConvexBody body;
    Json params;
};

struct Report
{
    Json header;
    std::vector<CheckResult> results;
    int passes = 0;
    int failures = 0;
    int inconclusive = 0;
    std::vector<std::string> errors;  //!< instances that raised

    Json to_json() const;
    std::string to_csv() const;
};

namespace detail
{
inline std::vector<double> p_values(HarnessConfig const& cfg, int n)
{
    std::vector<double> out;
    for (double p : cfg.p_grid)
        if (std::abs(n + p) >= 0.25 && p != 0)
            out.push_back(p);
    return out;
}

inline std::string pid(double p)
{
    return "p=" + fmt_num(p);
}

inline Json mat_rows(Mat const& m)
{
    return rows_to_json(m);
}
}  // namespace detail

//! Every instance of the selected checks, in a fixed order.
inline std::vector<InstanceSpec> build_instances(HarnessConfig const& cfg)
{
    std::vector<InstanceSpec> out;
    std::set<std::string> const wanted = cfg.checks.empty()
                                             ? std::set<std::string>(all_checks().begin(), all_checks().end())
                                             : std::set<std::string>(cfg.checks.begin(), cfg.checks.end());
    auto add = [&](std::string const& id, std::string const& name,
                   ConvexBody const& k, Json params, std::string suffix) {
        if (!wanted.count(id))
            return;
        out.push_back({id, id + "/" + name + (suffix.empty() ? "" : "/" + suffix), k,
                       std::move(params)});
    };
    using detail::pid;
    for (int n : cfg.dims)
    {
        auto bodies = canonical_bodies(n);
        for (auto& rb : random_bodies(cfg, n))
            bodies.push_back(std::move(rb));
        auto const ps = detail::p_values(cfg, n);
        std::mt19937_64 rng(derive_seed(cfg.seed, 500 + n));
        std::normal_distribution<double> normal(0.0, 0.3);

        for (auto const& nb : bodies)
        {
            auto const& k = nb.body;
            bool const poly = k.is_polytope();
            bool const f0 = in_F0plus(k);
            bool const cell = detail::centered_ellipsoid(k);
            ConvexBody const kc = centered(k);
            bool const recentred = body_to_json(kc) != body_to_json(k);
            std::string const cname = recentred ? nb.name + "@centroid" : nb.name;

            if (auto const* b = k.as<ShiftedBall>(); b && b->center.isZero(0))
            {
                for (double p : cfg.p_grid)
                    if (std::abs(n + p) >= 0.25)
                        add("ball_fixed_point", nb.name, k, {{"p", p}}, pid(p));
            }
            if (auto const* e = k.as<Ellipsoid>(); e && cell)
            {
                for (double p : ps)
                    add("ellipsoid_closed_form", nb.name, k, {{"p", p}}, pid(p));
            }
            if (poly)
            {
                for (double p : cfg.p_grid)
                    add("vp_exactness", nb.name, k, {{"p", p}}, pid(p));
            }
            for (double p : ps)
            {
                add("volume_product", nb.name, k, {{"p", p}}, pid(p));
                add("p_surface", nb.name, k, {{"p", p}}, pid(p));
                if (f0)
                    add("sandwich", nb.name, k, {{"p", p}}, pid(p));
                add("santalo_style", cname, kc, {{"p", p}}, pid(p));
                add("isoperimetric", cname, kc, {{"p", p}, {"variant", "centered"}},
                    pid(p));
                if (((p > 0 && p < 1) || (p < 0 && p > -n)) && recentred)
                {
                    add("isoperimetric", nb.name, k,
                        {{"p", p}, {"variant", "uncentered"}}, pid(p) + "/uncentered");
                }
            }
            add("blaschke_santalo", cname, kc, {{"normalization", "centroid"}}, "centroid");
            add("blaschke_santalo", nb.name, k, {{"normalization", "santalo"}}, "santalo");

            // Containment in the circumscribed ball / of the inscribed ball.
            {
                auto const& g = make_grid(n, n == 2 ? 512 : 1024);
                double hmax = 0, hmin = std::numeric_limits<double>::infinity();
                for (Eigen::Index i = 0; i < g.size(); ++i)
                {
                    double const h = detail::support_unchecked(kc, g.nodes.col(i));
                    hmax = std::max(hmax, h);
                    hmin = std::min(hmin, h);
                }
                if (auto const* geo = kc.geometry())
                {
                    hmax = 0;
                    for (Eigen::Index j = 0; j < geo->vertices.cols(); ++j)
                        hmax = std::max(hmax, geo->vertices.col(j).norm());
                    hmin = std::numeric_limits<double>::infinity();
                    for (auto const& f : geo->facets)
                        hmin = std::min(hmin, f.offset);
                }
                double const outer = hmax * (1 + 1e-9);
                double const inner = hmin * (1 - 1e-3);
                for (double p : ps)
                {
                    if (p == n)
                        continue;
                    bool const k_in_e = (p > 0 && p < n) || p < -n;
                    add("containment", cname, kc,
                        {{"p", p},
                         {"role", k_in_e ? "K_in_E" : "E_in_K"},
                         {"radius", k_in_e ? outer : inner}},
                        pid(p));
                }
            }

            // Cyclic and monotone tuples.
            std::vector<std::array<double, 3>> triples;
            std::vector<std::array<double, 2>> pairs;
            if (n == 2)
            {
                triples = {{0.5, 2, -1}, {0.5, -1, 2}, {-1, -0.5, -1.5},
                           {-1, -1.5, -0.5}, {-3, -1, -5}, {-3, -5, -1}};
                pairs = {{-1, 0.5}, {0.5, 2}, {-1.5, -0.5}, {-5, -3}, {-5, 1},
                         {-5, -1}, {-1, 1}, {0.5, 1}};
            }
            else
            {
                triples = {{0.5, 2, -1}, {0.5, -1, 2}, {-1.5, -0.5, -2.5},
                           {-1.5, -2.5, -0.5}, {-4, -1, -6}, {-4, -6, -1}};
                pairs = {{-1, 0.5}, {0.5, 2}, {-2.5, -0.5}, {-6, -4}, {-6, 1},
                         {-6, -1}, {-1, 1}, {0.5, 1}};
            }
            for (auto const& [r, s, t] : triples)
            {
                add("cyclic", nb.name, k,
                    {{"kind", "three_term"}, {"r", r}, {"s", s}, {"t", t}},
                    "r=" + detail::fmt_num(r) + ",s=" + detail::fmt_num(s) + ",t="
                        + detail::fmt_num(t));
            }
            for (auto const& [q, p] : pairs)
            {
                add("cyclic", nb.name, k, {{"kind", "monotone"}, {"q", q}, {"p", p}},
                    "q=" + detail::fmt_num(q) + ",p=" + detail::fmt_num(p));
            }
            if (poly || f0)
            {
                std::vector<std::array<double, 3>> const holder{
                    {1, 0, 2}, {1, 2, -1}, {0.5, -3, 4}, {-1, -2, 3}};
                Mat a = Mat::Identity(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        a(i, j) += normal(rng);
                if (std::abs(a.determinant()) < 0.1)
                    a = Mat::Identity(n, n);
                Json const q = body_to_json(ConvexBody::ellipsoid(a));
                for (auto const& [r, s, t] : holder)
                {
                    add("cyclic", nb.name, k,
                        {{"kind", "holder"}, {"r", r}, {"s", s}, {"t", t}, {"Q", q}},
                        "holder/r=" + detail::fmt_num(r) + ",s=" + detail::fmt_num(s)
                            + ",t=" + detail::fmt_num(t));
                }
            }
            if (f0 && n == 2 && k.as<FourierBody2D>())
            {
                for (double p : {-3.0, -1.0, 0.5, 1.0, 2.0})
                {
                    add("variational", nb.name, k, {{"p", p}}, pid(p));
                    add("vp_membership", nb.name, k, {{"p", p}}, pid(p));
                }
            }
            if (cell)
            {
                for (double p : ps)
                {
                    add("affine_geominimal", nb.name, k, {{"p", p}}, pid(p));
                    add("vp_membership", nb.name, k, {{"p", p}}, pid(p));
                }
            }
        }

        // Homogeneity on a fixed subset with seeded maps.
        for (auto const& nb : bodies)
        {
            static std::set<std::string> const subset{
                "ball2", "square", "triangle", "ellipse-general", "ball3", "cube",
                "ellipsoid-3"};
            if (!subset.count(nb.name))
                continue;
            for (double p : {-0.5, 1.0, 2.0})
            {
                Mat t = Mat::Identity(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        t(i, j) += normal(rng);
                if (std::abs(t.determinant()) < 0.1)
                    t = 2 * Mat::Identity(n, n);
                add("homogeneity", nb.name, nb.body, {{"p", p}, {"T", detail::mat_rows(t)}},
                    pid(p));
            }
        }
        if (n == 2)
        {
            Mat d(2, 2);
            d << 2, 0, 0, 1;
            add("homogeneity", "ball2", ConvexBody::ball(2),
                {{"p", 1.0}, {"T", detail::mat_rows(d)}}, "diag21");
            add("homogeneity", "ball2", ConvexBody::ball(2),
                {{"p", 2.0}, {"T", detail::mat_rows(3 * Mat::Identity(2, 2))}}, "dilate3");
        }

        // Shifted balls.
        for (double len : {0.1, 0.5, 0.9})
        {
            for (double p : {0.25, 0.5, 0.75, -0.5, -1.0, -1.5})
            {
                Vec z = Vec::Zero(n);
                z(0) = len;
                if (n == 3)
                    z = len * Vec::Ones(3) / std::sqrt(3.0);
                add("translation_balls", "ball" + std::to_string(n), ConvexBody::ball(n),
                    {{"p", p}, {"z0", detail::vec_to_json(z)}},
                    "z0=" + detail::fmt_num(len) + "/" + pid(p));
            }
        }
    }
    return out;
}

inline int thread_count(HarnessConfig const& cfg)
{
    int t = cfg.threads > 0 ? cfg.threads
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (char const* env = std::getenv("GEOMINIMA_THREADS"))
    {
        int const cap = std::atoi(env);
        if (cap > 0)
            t = std::min(t, cap);
    }
    return std::max(1, t);
}

//! Apply f to 0..count-1 on a capped thread pool; results stay index-ordered.
template<class F>
void parallel_for(int count, int threads, F&& f)
{
    if (threads <= 1 || count <= 1)
    {
        for (int i = 0; i < count; ++i)
            f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, count); ++t)
    {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++)
                f(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

inline Report run_instances(std::vector<InstanceSpec> const& instances,
                            Evaluator& ev)
{
    std::vector<std::vector<CheckResult>> per(instances.size());
    std::vector<std::string> errs(instances.size());
    parallel_for(static_cast<int>(instances.size()), thread_count(ev.config()),
                 [&](int i) {
                     auto const& in = instances[static_cast<std::size_t>(i)];
                     try
                     {
                         per[static_cast<std::size_t>(i)]
                             = run_check(in.check_id, in.instance_id, in.body, in.params, ev);
                     }
                     catch (Error const& e)
                     {
                         errs[static_cast<std::size_t>(i)] = in.instance_id + ": " + e.what();
                     }
                 });
    Report rep;
    rep.header = {{"tool", "geominima"},
                  {"format_version", 1},
                  {"canonical_list", "canonical-v1"},
                  {"config", config_to_json(ev.config())}};
    for (auto& v : per)
    {
        for (auto& r : v)
        {
            switch (r.verdict)
            {
                case Verdict::pass:
                    ++rep.passes;
                    break;
                case Verdict::fail:
                    ++rep.failures;
                    break;
                default:
                    ++rep.inconclusive;
            }
            rep.results.push_back(std::move(r));
        }
    }
    for (auto& e : errs)
        if (!e.empty())
            rep.errors.push_back(std::move(e));
    return rep;
}

//! Run the configured suite. Deterministic for a fixed config.
inline Report run_suite(HarnessConfig const& cfg)
{
    Evaluator ev(cfg);
    return run_instances(build_instances(cfg), ev);
}

//! Re-run one serialized instance ({"check_id", "body", "params"}).
inline std::vector<CheckResult> replay(Json const& instance, HarnessConfig const& cfg)
{
    Evaluator ev(cfg);
    auto const id = detail::field(instance, "check_id").get<std::string>();
    return run_check(id, id + "/replay", body_from_json(detail::field(instance, "body")),
                     detail::field(instance, "params"), ev);
}

inline Json result_to_json(CheckResult const& r)
{
    Json j;
    j["check_id"] = r.check_id;
    j["clause"] = r.clause;
    j["instance_id"] = r.instance_id;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["relative_margin"] = r.relative_margin;
    j["tolerance"] = r.tolerance;
    j["verdict"] = to_string(r.verdict);
    if (!r.note.empty())
        j["note"] = r.note;
    j["instance"] = r.instance;
    return j;
}

inline Json Report::to_json() const
{
    Json j;
    j["header"] = header;
    Json per = Json::object();
    for (auto const& r : results)
    {
        auto& s = per[r.check_id];
        if (s.is_null())
        {
            s = {{"pass", 0}, {"fail", 0}, {"inconclusive", 0},
                 {"worst_relative_margin", nullptr}, {"worst_instance", nullptr}};
        }
        s[to_string(r.verdict)] = s[to_string(r.verdict)].get<int>() + 1;
        if (std::isfinite(r.relative_margin)
            && (s["worst_relative_margin"].is_null()
                || r.relative_margin < s["worst_relative_margin"].get<double>()))
        {
            s["worst_relative_margin"] = r.relative_margin;
            s["worst_instance"] = r.instance_id + "#" + r.clause;
        }
    }
    j["summary"] = {{"total", results.size()},
                    {"pass", passes},
                    {"fail", failures},
                    {"inconclusive", inconclusive},
                    {"errors", errors},
                    {"per_check", per}};
    // Tightest decided results first: a margin-sorted view.
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < results.size(); ++i)
        if (std::isfinite(results[i].relative_margin))
            idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
        return results[a].relative_margin < results[b].relative_margin;
    });
    Json tight = Json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(10, idx.size()); ++i)
    {
        auto const& r = results[idx[i]];
        tight.push_back({{"instance_id", r.instance_id},
                         {"clause", r.clause},
                         {"relative_margin", r.relative_margin},
                         {"verdict", to_string(r.verdict)}});
    }
    j["tightest"] = std::move(tight);
    Json res = Json::array();
    Json fails = Json::array();
    for (auto const& r : results)
    {
        res.push_back(result_to_json(r));
        if (r.verdict == Verdict::fail)
            fails.push_back(r.instance);
    }
    j["results"] = std::move(res);
    j["failures"] = std::move(fails);
    return j;
}

inline std::string Report::to_csv() const
{
    std::string out = "check_id,instance_id,lhs,rhs,margin,verdict\n";
    char buf[96];
    for (auto const& r : results)
    {
        out += r.check_id + "," + r.instance_id + "#" + r.clause;
        for (double v : {r.lhs, r.rhs, r.margin})
        {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out += buf;
        }
        out += ",";
        out += to_string(r.verdict);
        out += "\n";
    }
    return out;
}

}  // namespace geominima
