#pragma once

#include <string>
#include <vector>

#include "functionals.hpp"
#include "optimize.hpp"

namespace geominima
{

//! Which side of the true value an estimate lies on.
enum class BoundDirection
{
    upper,  //!< p > 0: the infimum is at most the estimate
    lower,  //!< p < 0: the supremum is at least the estimate
    exact,  //!< p = 0 or closed form
};

inline char const* to_string(BoundDirection d)
{
    switch (d)
    {
        case BoundDirection::upper:
            return "upper";
        case BoundDirection::lower:
            return "lower";
        default:
            return "exact";
    }
}

struct TraceEntry
{
    std::string family;
    int restart = 0;
    int evaluations = 0;
    bool converged = false;
    double value = 0;
};

struct GpEstimate
{
    double p = 0;
    double value = 0;
    BoundDirection direction = BoundDirection::exact;
    ConvexBody witness = ConvexBody::ball(2);
    std::string witness_family;
    std::vector<TraceEntry> trace;
    double objective_at_K = 0;
    double objective_at_B = 0;
    int restarts_used = 0;
    //! "ok", or "suspected-unbounded" when a sup search grows past 1e12 J(K).
    std::string status = "ok";
};

struct EstimateOptions
{
    int restarts = 8;
    double tol = 1e-9;  //!< spread of log J for simplex convergence
    std::uint64_t seed = 0;
    bool ellipsoid_family = true;
    bool polytope_family = true;
    int max_evals = 0;  //!< per restart; 0 picks 400 * (params + 1)
    SphericalGrid const* grid = nullptr;
};

namespace detail
{
//! log sum_i mass_i exp(p (log h_Q - log h_K)) without overflow.
inline double log_sample_vp(ConeSample const& s, Vec const& log_hq, double p)
{
    if (p == 0)
        return std::log(s.mass.sum());
    Vec const e = p * (log_hq - s.log_h);
    double const top = e.maxCoeff();
    double total = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i)
        total += s.mass(i) * std::exp(e(i) - top);
    return top + std::log(total);
}

inline double log_objective(int n, double p, double log_vp, double log_polar)
{
    return std::log(static_cast<double>(n)) + n / (n + p) * log_vp
           + p / (n + p) * log_polar;
}

//! Facet normals of a polytope K (the support family's fan), else empty.
inline Mat family_normals(ConvexBody const& k)
{
    auto const* g = k.geometry();
    if (!g)
        return {};
    Mat u(k.dim(), static_cast<Eigen::Index>(g->facets.size()));
    for (std::size_t i = 0; i < g->facets.size(); ++i)
        u.col(static_cast<Eigen::Index>(i)) = g->facets[i].normal;
    return u;
}

//! Lower-triangular factor from parameters: first diagonal fixed to 1.
inline Mat ellipsoid_factor(int n, Vec const& x)
{
    Mat l = Mat::Zero(n, n);
    Eigen::Index c = 0;
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j <= i; ++j)
        {
            if (i == j)
                l(i, i) = i == 0 ? 1.0 : std::exp(x(c++));
            else
                l(i, j) = x(c++);
        }
    }
    return l;
}
}  // namespace detail

//---------------------------------------------------------------------------//
//! J(Q) = n V_p(K, Q)^{n/(n+p)} |Q°|^{p/(n+p)}, computed in log-space.
inline double objective(ConvexBody const& k,
                        ConvexBody const& q,
                        double p,
                        SphericalGrid const* grid = nullptr)
{
    int const n = k.dim();
    require_not_minus_n(n, p);
    if (p == 0)
        return n * volume(k);
    double log_vp = 0;
    if (&k == &q)
    {
        log_vp = std::log(volume(k));
    }
    else
    {
        auto const& g = grid ? *grid : default_grid(n);
        auto const s = detail::cone_sample(k, g);
        log_vp = detail::log_sample_vp(s, detail::log_support_at(q, s.dirs), p);
    }
    double const log_polar = std::log(volume(polar(q)));
    return std::exp(detail::log_objective(n, p, log_vp, log_polar));
}

//! J(K) = n |K|^{n/(n+p)} |K°|^{p/(n+p)}.
inline double objective_at_self(ConvexBody const& k, double p)
{
    int const n = k.dim();
    require_not_minus_n(n, p);
    return std::exp(detail::log_objective(
        n, p, std::log(volume(k)), std::log(volume(polar(k)))));
}

//---------------------------------------------------------------------------//
/*!
 * Estimate of the L_p geominimal surface area.
 *
 * Minimizes J over the candidate families for p > 0 (an upper bound for
 * the infimum) and maximizes for p < 0 (a lower bound for the supremum).
 * The fixed set {K, B, rB} is always probed, so the estimate never loses to
 * J(K) or J(B).
 */
inline GpEstimate estimate_Gp(ConvexBody const& k,
                              double p,
                              EstimateOptions const& opts = {})
{
    int const n = k.dim();
    require_not_minus_n(n, p);
    if (k.is_polytope() && !k.geometry())
        throw UnsupportedError("estimating G_p of a polytope needs n in {2,3}");

    GpEstimate est;
    est.p = p;
    est.witness = k;
    est.witness_family = "fixed:K";
    double const vol_k = volume(k);
    if (p == 0)
    {
        est.value = n * vol_k;
        est.objective_at_K = est.value;
        est.objective_at_B = est.value;
        est.direction = BoundDirection::exact;
        return est;
    }
    est.direction = p > 0 ? BoundDirection::upper : BoundDirection::lower;
    double const sign = p > 0 ? 1.0 : -1.0;

    auto const& grid = opts.grid ? *opts.grid : default_grid(n);
    auto const cs = detail::cone_sample(k, grid);
    double const omega = ball_volume(n);

    double const log_jk = detail::log_objective(
        n, p, std::log(vol_k), std::log(volume(polar(k))));
    double const log_jb = detail::log_objective(
        n, p, detail::log_sample_vp(cs, Vec::Zero(cs.mass.size()), p),
        std::log(omega));
    est.objective_at_K = std::exp(log_jk);
    est.objective_at_B = std::exp(log_jb);

    // Best so far, stored as sign * log J so that smaller is better.
    double best = sign * log_jk;
    // Whether the current witness sits against a family's feasibility cap.
    bool best_at_cap = false;
    bool candidate_at_cap = false;
    est.trace.push_back({"fixed:K", 0, 1, true, est.objective_at_K});
    auto consider = [&](double log_j,
                        std::string const& family,
                        auto&& make_witness) {
        double const score = sign * log_j;
        // Ties within 1e-12 keep the earlier (fewer-parameter) witness.
        if (score < best - 1e-12)
        {
            best = score;
            best_at_cap = candidate_at_cap;
            est.witness = make_witness();
            est.witness_family = family;
        }
    };
    for (double r : {0.25, 0.5, 1.0, 2.0, 4.0})
    {
        double const lj = log_jb;  // J is invariant under dilation of Q
        std::string const name = "fixed:" + std::to_string(r).substr(0, 4) + "B";
        est.trace.push_back({name, 0, 1, true, std::exp(lj)});
        consider(lj, name, [&] { return ConvexBody::ball(n, r); });
    }

    auto run_family = [&](std::string const& family,
                          int family_index,
                          Vec const& start,
                          std::function<double(Vec const&)> const& log_j,
                          std::function<ConvexBody(Vec const&)> const& make,
                          std::function<bool(Vec const&)> const& at_cap) {
        auto const d = start.size();
        int const max_evals = opts.max_evals > 0
                                  ? opts.max_evals
                                  : 400 * static_cast<int>(d + 1);
        auto f = [&](Vec const& x) { return sign * log_j(x); };
        std::vector<double> finals;
        Vec last_valid = start;
        bool any_finite = false;
        for (int r = 0; r < std::max(1, opts.restarts); ++r)
        {
            Vec x0 = start;
            if (r > 0)
            {
                std::mt19937_64 rng(derive_seed(
                    opts.seed, static_cast<std::uint64_t>(family_index),
                    static_cast<std::uint64_t>(r)));
                std::normal_distribution<double> normal(0.0, 0.3);
                for (Eigen::Index i = 0; i < d; ++i)
                    x0(i) += normal(rng);
            }
            auto const res = nelder_mead(f, x0, 0.2, opts.tol, max_evals);
            est.restarts_used = std::max(est.restarts_used, r + 1);
            double const lj = sign * res.f;
            est.trace.push_back({family, r, res.evaluations, res.converged,
                                 std::isfinite(lj) ? std::exp(lj) : lj});
            if (!std::isfinite(res.f))
                continue;
            any_finite = true;
            last_valid = res.x;
            candidate_at_cap = at_cap(res.x);
            consider(lj, family, [&] { return make(res.x); });
            finals.push_back(res.f);
            // Two restarts agreeing on the optimum end the search.
            if (finals.size() >= 2)
            {
                std::sort(finals.begin(), finals.end());
                if (finals[1] - finals[0] <= opts.tol)
                    break;
            }
        }
        if (!any_finite)
        {
            throw ConvergenceError("objective was non-finite on every restart "
                                   "of family " + family,
                                   last_valid);
        }
    };

    if (opts.ellipsoid_family)
    {
        int const params = n * (n + 1) / 2 - 1;
        auto make = [&](Vec const& x) {
            return ConvexBody::ellipsoid(detail::ellipsoid_factor(n, x));
        };
        auto log_j = [&](Vec const& x) {
            Mat const l = detail::ellipsoid_factor(n, x);
            Vec const diag = l.diagonal();
            double const cond = diag.maxCoeff() / diag.minCoeff();
            if (!(cond < 1e4) || !l.allFinite())
                return std::numeric_limits<double>::quiet_NaN();
            Eigen::JacobiSVD<Mat> svd(l);
            auto const& sv = svd.singularValues();
            if (!(sv(0) < 1e4 * sv(n - 1)))
                return std::numeric_limits<double>::quiet_NaN();
            Vec const lh = (l.transpose() * cs.dirs)
                               .colwise()
                               .norm()
                               .array()
                               .log()
                               .matrix()
                               .transpose();
            double const log_polar = std::log(omega) - diag.array().log().sum();
            return detail::log_objective(
                n, p, detail::log_sample_vp(cs, lh, p), log_polar);
        };
        auto at_cap = [&](Vec const& x) {
            Eigen::JacobiSVD<Mat> svd(detail::ellipsoid_factor(n, x));
            auto const& sv = svd.singularValues();
            return sv(0) > 0.99 * 1e4 * sv(n - 1);
        };
        run_family("ellipsoid", 1, Vec::Zero(params), log_j, make, at_cap);
    }

    Mat const normals = opts.polytope_family ? detail::family_normals(k) : Mat();
    if (normals.cols() > 0)
    {
        auto const m = normals.cols();
        Vec hk(m);
        for (Eigen::Index i = 0; i < m; ++i)
            hk(i) = detail::support_unchecked(k, normals.col(i));
        auto offsets_of = [&](Vec const& x) {
            Vec t(m);
            t(0) = 1;
            for (Eigen::Index i = 1; i < m; ++i)
                t(i) = std::exp(x(i - 1));
            return t;
        };
        auto make = [&](Vec const& x) {
            return ConvexBody::h_polytope(normals, offsets_of(x));
        };
        double const max_span = 6 * std::log(10.0);
        auto span = [](Vec const& x) {
            return std::max(x.maxCoeff(), 0.0) - std::min(x.minCoeff(), 0.0);
        };
        auto at_cap = [&](Vec const& x) { return span(x) > 0.99 * max_span; };
        auto log_j = [&](Vec const& x) {
            // Offsets spanning more than 6 decades are treated as infeasible.
            if (!x.allFinite() || span(x) > max_span)
            {
                return std::numeric_limits<double>::quiet_NaN();
            }
            DualHull dh;
            try
            {
                dh = dual_hull(normals, offsets_of(x));
            }
            catch (Error const&)
            {
                return std::numeric_limits<double>::quiet_NaN();
            }
            Mat const dots = dh.primal_vertices.transpose() * cs.dirs;
            Vec lh(cs.dirs.cols());
            for (Eigen::Index i = 0; i < lh.size(); ++i)
            {
                double const h = dots.col(i).maxCoeff();
                if (!(h > 0))
                    return std::numeric_limits<double>::quiet_NaN();
                lh(i) = std::log(h);
            }
            return detail::log_objective(n, p, detail::log_sample_vp(cs, lh, p),
                                         std::log(dh.polar_volume));
        };
        Vec start(m - 1);
        for (Eigen::Index i = 1; i < m; ++i)
            start(i - 1) = std::log(hk(i) / hk(0));
        run_family("polytope", 2, start, log_j, make, at_cap);
    }

    est.value = std::exp(sign * best);
    // A supremum search that ends against a family's feasibility cap far
    // above J(K) is still climbing; the value is then only a lower bound.
    if (p < 0
        && (est.value > 1e12 * est.objective_at_K
            || (best_at_cap && est.value > 1e3 * est.objective_at_K)))
    {
        est.status = "suspected-unbounded";
    }
    return est;
}

//---------------------------------------------------------------------------//
struct ShiftedBallBound
{
    double value = 0;      //!< J(B) for K = z0 + r B
    double threshold = 0;  //!< n omega_n r^{n(n-p)/(n+p)} = G_p of r B
    double margin = 0;     //!< threshold - value for p > 0, reversed for p < 0
};

/*!
 * J(B) for the shifted ball z0 + r B, which bounds its G_p from above for
 * p in (0,1) and from below for p in (-n,0).
 */
inline ShiftedBallBound gp_ball_shifted(Vec const& z0,
                                        double r,
                                        double p,
                                        SphericalGrid const* grid = nullptr)
{
    int const n = static_cast<int>(z0.size());
    if (!((p > 0 && p < 1) || (p < 0 && p > -n)))
        throw InputError("p must lie in (-n, 0) or (0, 1)");
    auto const k = ConvexBody::shifted_ball(z0, r);
    auto const& g = grid ? *grid : default_grid(n);
    auto const cs = detail::cone_sample(k, g);
    double const log_vp = detail::log_sample_vp(cs, Vec::Constant(cs.mass.size(), 0.0), p);
    ShiftedBallBound out;
    out.value = std::exp(detail::log_objective(n, p, log_vp,
                                               std::log(ball_volume(n))));
    out.threshold = sphere_area(n) * std::pow(r, n * (n - p) / (n + p));
    out.margin = p > 0 ? out.threshold - out.value : out.value - out.threshold;
    return out;
}

//! Lutwak's G_p from the extended value: G_p = [v^{n+p} / (n omega)^p]^{1/n}.
inline double lutwak_Gp_from_tilde(double value, double p, int n)
{
    if (p < 1)
        throw InputError("conversion to Lutwak's G_p needs p >= 1");
    if (!(value > 0))
        throw InputError("geominimal value must be positive");
    return std::exp(((n + p) * std::log(value)
                     - p * std::log(sphere_area(n)))
                    / n);
}

//! Inverse of lutwak_Gp_from_tilde.
inline double tilde_from_lutwak_Gp(double g, double p, int n)
{
    if (p < 1)
        throw InputError("conversion from Lutwak's G_p needs p >= 1");
    return std::exp((n * std::log(g) + p * std::log(sphere_area(n)))
                    / (n + p));
}

}  // namespace geominima
