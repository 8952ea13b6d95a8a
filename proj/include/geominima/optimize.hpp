#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "core.hpp"

namespace geominima
{

struct NelderMeadResult
{
    Vec x;
    double f = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

//---------------------------------------------------------------------------//
/*!
 * Downhill simplex minimization.
 *
 * Non-finite objective values are treated as +inf (infeasible), so the
 * simplex contracts away from them. Stops when the spread of objective
 * values over the simplex drops below \c ftol or after \c max_evals.
 */
inline NelderMeadResult nelder_mead(std::function<double(Vec const&)> const& f,
                                    Vec const& x0,
                                    double step,
                                    double ftol,
                                    int max_evals)
{
    auto const d = x0.size();
    NelderMeadResult out;
    auto eval = [&](Vec const& x) {
        ++out.evaluations;
        double const v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    if (d == 0)
    {
        out.x = x0;
        out.f = eval(x0);
        out.converged = true;
        return out;
    }
    std::vector<Vec> pts(d + 1, x0);
    std::vector<double> vals(d + 1);
    for (Eigen::Index i = 0; i < d; ++i)
        pts[i + 1](i) += step;
    for (Eigen::Index i = 0; i <= d; ++i)
        vals[i] = eval(pts[i]);

    std::vector<Eigen::Index> order(d + 1);
    while (true)
    {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
            return vals[a] < vals[b];
        });
        auto const best = order.front(), worst = order.back();
        auto const second = order[d - 1];
        double const spread = vals[worst] - vals[best];
        if (std::isfinite(vals[worst]) && spread <= ftol)
        {
            out.converged = true;
            break;
        }
        if (out.evaluations >= max_evals)
            break;

        Vec centroid = Vec::Zero(d);
        for (Eigen::Index i = 0; i <= d; ++i)
            if (i != worst)
                centroid += pts[i];
        centroid /= static_cast<double>(d);

        Vec const xr = centroid + (centroid - pts[worst]);
        double const fr = eval(xr);
        if (fr < vals[best])
        {
            Vec const xe = centroid + 2.0 * (centroid - pts[worst]);
            double const fe = eval(xe);
            if (fe < fr)
                pts[worst] = xe, vals[worst] = fe;
            else
                pts[worst] = xr, vals[worst] = fr;
            continue;
        }
        if (fr < vals[second])
        {
            pts[worst] = xr, vals[worst] = fr;
            continue;
        }
        bool const outside = fr < vals[worst];
        Vec const xc = outside ? Vec(centroid + 0.5 * (xr - centroid))
                               : Vec(centroid + 0.5 * (pts[worst] - centroid));
        double const fc = eval(xc);
        if (fc < (outside ? fr : vals[worst]))
        {
            pts[worst] = xc, vals[worst] = fc;
            continue;
        }
        for (Eigen::Index i = 0; i <= d; ++i)
        {
            if (i == best)
                continue;
            pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
            vals[i] = eval(pts[i]);
        }
    }
    auto const best = *std::min_element(
        order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    out.x = pts[best];
    out.f = vals[best];
    return out;
}

//! SplitMix64 step, used to derive independent seeds from a counter.
inline std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::uint64_t a,
                                 std::uint64_t b = 0)
{
    return mix_seed(mix_seed(mix_seed(seed) ^ a) ^ b);
}

}  // namespace geominima
