#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geominimal.hpp"
#include "measures.hpp"

namespace geominima
{

using Json = nlohmann::ordered_json;

namespace detail
{
inline Json vec_to_json(Vec const& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

//! Columns of m as a list of points.
inline Json cols_to_json(Mat const& m)
{
    Json a = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        a.push_back(vec_to_json(m.col(j)));
    return a;
}

//! Row-major nested list.
inline Json rows_to_json(Mat const& m)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        a.push_back(vec_to_json(m.row(i).transpose()));
    return a;
}

inline Vec json_to_vec(Json const& j, char const* what)
{
    if (!j.is_array())
        throw InputError(std::string("'") + what + "' must be a list of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        if (!j[i].is_number())
            throw InputError(std::string("'") + what + "' must be a list of numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

//! List of equal-length lists, either as columns (points) or rows.
inline Mat json_to_mat(Json const& j, char const* what, bool as_columns)
{
    if (!j.is_array() || j.empty())
        throw InputError(std::string("'") + what + "' must be a non-empty list of lists");
    auto const len = json_to_vec(j[0], what).size();
    Mat m = as_columns ? Mat(len, static_cast<Eigen::Index>(j.size()))
                       : Mat(static_cast<Eigen::Index>(j.size()), len);
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        Vec const v = json_to_vec(j[i], what);
        if (v.size() != len)
            throw InputError(std::string("'") + what + "' rows differ in length");
        if (as_columns)
            m.col(static_cast<Eigen::Index>(i)) = v;
        else
            m.row(static_cast<Eigen::Index>(i)) = v.transpose();
    }
    return m;
}

inline Json const& field(Json const& j, char const* key)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string("missing field '") + key + "'");
    return j.at(key);
}
}  // namespace detail

//---------------------------------------------------------------------------//
// Bodies
//---------------------------------------------------------------------------//

inline Json body_to_json(ConvexBody const& k)
{
    Json repr;
    repr["type"] = k.kind();
    std::visit(
        [&](auto const& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, HPolytope>)
            {
                repr["normals"] = detail::cols_to_json(r.normals);
                repr["offsets"] = detail::vec_to_json(r.offsets);
            }
            else if constexpr (std::is_same_v<T, VPolytope>)
            {
                repr["vertices"] = detail::cols_to_json(r.vertices);
            }
            else if constexpr (std::is_same_v<T, Ellipsoid>)
            {
                repr["matrix"] = detail::rows_to_json(r.matrix);
                if (!r.center.isZero(0))
                    repr["center"] = detail::vec_to_json(r.center);
            }
            else if constexpr (std::is_same_v<T, FourierBody2D>)
            {
                repr["a"] = detail::vec_to_json(r.a);
                repr["b"] = detail::vec_to_json(r.b);
            }
            else if constexpr (std::is_same_v<T, ShiftedBall>)
            {
                repr["center"] = detail::vec_to_json(r.center);
                repr["radius"] = r.radius;
            }
            else if constexpr (std::is_same_v<T, PolarBody>)
            {
                repr["of"] = body_to_json(*r.of);
            }
            else
            {
                repr["matrix"] = detail::rows_to_json(r.map);
                repr["base"] = body_to_json(*r.base);
            }
        },
        k.repr());
    Json out;
    out["dim"] = k.dim();
    out["repr"] = std::move(repr);
    return out;
}

inline ConvexBody body_from_json(Json const& j)
{
    auto const& dim_j = detail::field(j, "dim");
    if (!dim_j.is_number_integer())
        throw InputError("'dim' must be an integer");
    int const n = dim_j.get<int>();
    if (n < 2)
        throw InputError("'dim' must be at least 2");
    auto const& r = detail::field(j, "repr");
    auto const& type_j = detail::field(r, "type");
    if (!type_j.is_string())
        throw InputError("'type' must be a string");
    auto const type = type_j.get<std::string>();
    auto check_dim = [&](ConvexBody k) {
        if (k.dim() != n)
            throw InputError("'dim' does not match the representation");
        return k;
    };
    if (type == "h-polytope")
    {
        return check_dim(ConvexBody::h_polytope(
            detail::json_to_mat(detail::field(r, "normals"), "normals", true),
            detail::json_to_vec(detail::field(r, "offsets"), "offsets")));
    }
    if (type == "v-polytope")
    {
        return check_dim(ConvexBody::v_polytope(
            detail::json_to_mat(detail::field(r, "vertices"), "vertices", true)));
    }
    if (type == "ellipsoid")
    {
        Vec c;
        if (r.contains("center"))
            c = detail::json_to_vec(r.at("center"), "center");
        return check_dim(ConvexBody::ellipsoid(
            detail::json_to_mat(detail::field(r, "matrix"), "matrix", false), c));
    }
    if (type == "fourier2d")
    {
        Vec b;
        if (r.contains("b"))
            b = detail::json_to_vec(r.at("b"), "b");
        return check_dim(ConvexBody::fourier2d(
            detail::json_to_vec(detail::field(r, "a"), "a"), b));
    }
    if (type == "shifted-ball")
    {
        auto const& rad = detail::field(r, "radius");
        if (!rad.is_number())
            throw InputError("'radius' must be a number");
        return check_dim(ConvexBody::shifted_ball(
            detail::json_to_vec(detail::field(r, "center"), "center"),
            rad.get<double>()));
    }
    if (type == "polar")
        return check_dim(ConvexBody::polar_of(body_from_json(detail::field(r, "of"))));
    if (type == "linear-image")
    {
        return check_dim(ConvexBody::linear_image(
            detail::json_to_mat(detail::field(r, "matrix"), "matrix", false),
            body_from_json(detail::field(r, "base"))));
    }
    throw InputError("unknown body type '" + type + "'");
}

inline ConvexBody body_from_string(std::string const& text)
{
    Json j;
    try
    {
        j = Json::parse(text);
    }
    catch (Json::parse_error const& e)
    {
        throw InputError(std::string("malformed body JSON: ") + e.what());
    }
    return body_from_json(j);
}

inline ConvexBody load_body(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open body file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return body_from_string(ss.str());
}

//---------------------------------------------------------------------------//
// Measures and estimates
//---------------------------------------------------------------------------//

inline Json measure_to_json(SurfaceMeasure const& m)
{
    Json out;
    if (auto const* d = std::get_if<DiscreteMeasure>(&m.data))
    {
        out["type"] = "discrete";
        Json atoms = Json::array();
        for (Eigen::Index i = 0; i < d->masses.size(); ++i)
        {
            Json atom = detail::vec_to_json(d->normals.col(i));
            atom.push_back(d->masses(i));
            atoms.push_back(std::move(atom));
        }
        out["atoms"] = std::move(atoms);
    }
    else
    {
        auto const& c = std::get<DensityMeasure>(m.data);
        out["type"] = "density";
        out["grid_id"] = c.grid.id;
        out["values"] = detail::vec_to_json(c.values);
    }
    return out;
}

inline Json estimate_to_json(GpEstimate const& e)
{
    Json out;
    out["p"] = e.p;
    out["value"] = e.value;
    out["direction"] = to_string(e.direction);
    out["status"] = e.status;
    out["witness_family"] = e.witness_family;
    out["witness"] = body_to_json(e.witness);
    out["objective_at_K"] = e.objective_at_K;
    out["objective_at_B"] = e.objective_at_B;
    out["restarts_used"] = e.restarts_used;
    Json trace = Json::array();
    for (auto const& t : e.trace)
    {
        trace.push_back({{"family", t.family},
                         {"restart", t.restart},
                         {"evaluations", t.evaluations},
                         {"converged", t.converged},
                         {"value", t.value}});
    }
    out["trace"] = std::move(trace);
    return out;
}

}  // namespace geominima
