#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace geominima
{

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

//---------------------------------------------------------------------------//
// Error hierarchy. Every failure raised by the library derives from Error so
// callers can catch broadly and still switch on the concrete kind.
//---------------------------------------------------------------------------//
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Malformed or out-of-contract arguments (non-unit direction, singular map).
class InputError : public Error
{
  public:
    using Error::Error;
};

//! Mathematically undefined request (p = -n, origin outside the body).
class DomainError : public Error
{
  public:
    using Error::Error;
};

//! Valid request that this representation or dimension cannot answer.
class UnsupportedError : public Error
{
  public:
    using Error::Error;
};

//! Random instance generation gave up.
class GenerationError : public Error
{
  public:
    using Error::Error;
};

//! Iterative method failed; carries the best iterate it reached.
class ConvergenceError : public Error
{
  public:
    ConvergenceError(std::string const& what, Vec best)
        : Error(what), best_(std::move(best))
    {
    }

    Vec const& best_iterate() const { return best_; }

  private:
    Vec best_;
};

//---------------------------------------------------------------------------//
// Constants and small numeric helpers
//---------------------------------------------------------------------------//

//! Volume of the unit Euclidean ball in R^n.
inline double ball_volume(int n)
{
    double const half = 0.5 * n;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

//! Surface measure of S^{n-1}, equal to n times the ball volume.
inline double sphere_area(int n)
{
    return n * ball_volume(n);
}

//! x^e for x > 0, evaluated as exp(e log x).
inline double pow_pos(double x, double e)
{
    return std::exp(e * std::log(x));
}

//! Guard shared by every functional that has n + p in a denominator.
inline void require_not_minus_n(int n, double p)
{
    if (std::abs(n + p) < 1e-6)
    {
        throw DomainError("p = -n is excluded (|n + p| < 1e-6); got p = "
                          + std::to_string(p) + " for n = "
                          + std::to_string(n));
    }
}

inline void require_unit(Vec const& u)
{
    if (std::abs(u.norm() - 1.0) > 1e-12)
    {
        throw InputError("direction must be a unit vector (|u| = "
                         + std::to_string(u.norm()) + ")");
    }
}

//! Relative difference scaled by the larger magnitude.
inline double rel_diff(double a, double b)
{
    double const s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace geominima
