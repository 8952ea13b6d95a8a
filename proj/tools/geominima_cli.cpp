// Command-line front end: compute, estimate, verify, generate.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <geominima/geominima.hpp>

namespace gm = geominima;
using gm::Json;

namespace
{

enum ExitCode
{
    exit_ok = 0,
    exit_check_failure = 1,
    exit_usage = 2,
};

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string plain_num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string full_num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(std::string const& path, std::string const& text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot write '" + path + "'");
    out << text;
}

void check_p(int n, std::vector<double> const& ps)
{
    for (double p : ps)
        if (std::abs(n + p) < 1e-6)
            throw UsageError("p = " + plain_num(p) + " equals -n for n = "
                             + std::to_string(n) + "; the functionals are undefined there");
}

std::vector<std::string> split_list(std::string const& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

//! How a value was obtained, so no estimator number is reported bare.
Json method_of(gm::ConvexBody const& k, gm::SphericalGrid const* grid)
{
    bool const closed = k.is_polytope() || k.as<gm::Ellipsoid>() || k.as<gm::ShiftedBall>();
    if (closed && !(k.dim() >= 4 && k.is_polytope()))
        return {{"method", "exact"}, {"tolerance", 1e-12}};
    if (grid)
        return {{"method", "quadrature"}, {"grid", grid->id}, {"tolerance", 1e-6}};
    return {{"method", "quadrature"}, {"tolerance", 1e-6}};
}

//---------------------------------------------------------------------------//
// compute
//---------------------------------------------------------------------------//

struct ComputeArgs
{
    std::string body;
    std::string against;
    std::string quantities = "volume,polar_volume,mahler";
    std::vector<double> p;
    int grid = 0;
    std::string format = "json";
    std::string out;
};

int cmd_compute(ComputeArgs const& a)
{
    auto const k = gm::load_body(a.body);
    int const n = k.dim();
    check_p(n, a.p);
    std::unique_ptr<gm::SphericalGrid> grid;
    if (a.grid > 0)
        grid = std::make_unique<gm::SphericalGrid>(gm::make_grid(n, a.grid));
    gm::SphericalGrid const* g = grid.get();
    auto const q = a.against.empty() ? gm::ConvexBody::ball(n) : gm::load_body(a.against);
    if (q.dim() != n)
        throw UsageError("--against body has a different dimension");

    Json results = Json::object();
    Json errors = Json::object();
    auto const quantities = split_list(a.quantities);
    int ok = 0;
    // rows for csv/plain: quantity, p, value
    std::vector<std::tuple<std::string, std::string, double>> rows;
    auto scalar = [&](std::string const& name, double v) {
        Json j = method_of(k, g);
        j["value"] = v;
        results[name] = std::move(j);
        rows.emplace_back(name, "", v);
    };
    auto table = [&](std::string const& name, auto&& f) {
        if (a.p.empty())
            throw UsageError("quantity '" + name + "' needs --p");
        Json t = Json::array();
        for (double p : a.p)
        {
            double const v = f(p);
            Json e = method_of(k, g);
            e["p"] = p;
            e["value"] = v;
            t.push_back(std::move(e));
            rows.emplace_back(name, plain_num(p), v);
        }
        results[name] = std::move(t);
    };
    for (auto const& qn : quantities)
    {
        try
        {
            if (qn == "volume")
                scalar(qn, gm::volume(k));
            else if (qn == "polar_volume")
                scalar(qn, gm::volume(gm::polar(k)));
            else if (qn == "mahler")
                scalar(qn, gm::mahler(k));
            else if (qn == "centroid" || qn == "santalo_point")
            {
                gm::Vec const c = qn == "centroid" ? gm::centroid(k) : gm::santalo_point(k);
                results[qn] = gm::detail::vec_to_json(c);
                for (Eigen::Index i = 0; i < c.size(); ++i)
                    rows.emplace_back(qn, "x" + std::to_string(i), c(i));
            }
            else if (qn == "mixed_volume")
                table(qn, [&](double p) { return gm::mixed_volume_p(k, q, p, g); });
            else if (qn == "p_surface_area")
                table(qn, [&](double p) { return gm::p_surface_area(k, p, g); });
            else if (qn == "affine_surface_area")
                table(qn, [&](double p) { return gm::affine_surface_area_p(k, p, g); });
            else if (qn == "in_vp")
            {
                if (a.p.empty())
                    throw UsageError("quantity 'in_vp' needs --p");
                Json t = Json::array();
                auto const& mg = g ? *g : gm::default_grid(n);
                for (double p : a.p)
                {
                    auto const m = gm::in_Vp(k, p, mg);
                    t.push_back({{"p", p},
                                 {"member", m.member},
                                 {"min_curvature", m.min_curvature},
                                 {"tolerance", 1e-8}});
                    rows.emplace_back(qn, plain_num(p), m.member ? 1.0 : 0.0);
                }
                results[qn] = std::move(t);
            }
            else if (qn == "surface_measure")
            {
                results[qn] = gm::measure_to_json(gm::surface_measure(k, g ? *g : gm::default_grid(n)));
            }
            else
            {
                throw gm::InputError("unknown quantity '" + qn + "'");
            }
            ++ok;
        }
        catch (gm::Error const& e)
        {
            errors[qn] = e.what();
        }
    }

    if (a.format == "json")
    {
        Json out;
        out["body"] = gm::body_to_json(k);
        if (g)
            out["grid"] = g->id;
        out["results"] = std::move(results);
        if (!errors.empty())
            out["errors"] = errors;
        write_text(a.out, out.dump(2) + "\n");
    }
    else
    {
        std::string text = a.format == "csv" ? "quantity,p,value\n" : "";
        for (auto const& [name, p, v] : rows)
        {
            if (a.format == "csv")
                text += name + "," + p + "," + full_num(v) + "\n";
            else
                text += name + (p.empty() ? "" : "[" + p + "]") + ": " + plain_num(v) + "\n";
        }
        for (auto const& [name, msg] : errors.items())
            std::cerr << "error: " << name << ": " << msg.get<std::string>() << "\n";
        write_text(a.out, text);
    }
    return ok == 0 ? exit_usage : exit_ok;
}

//---------------------------------------------------------------------------//
// estimate
//---------------------------------------------------------------------------//

struct EstimateArgs
{
    std::string body;
    std::vector<double> p;
    int grid = 0;
    std::uint64_t seed = 0;
    int restarts = 8;
    std::string format = "json";
    std::string out;
};

int cmd_estimate(EstimateArgs const& a)
{
    auto const k = gm::load_body(a.body);
    int const n = k.dim();
    if (a.p.empty())
        throw UsageError("estimate needs --p");
    check_p(n, a.p);
    std::unique_ptr<gm::SphericalGrid> grid;
    if (a.grid > 0)
        grid = std::make_unique<gm::SphericalGrid>(gm::make_grid(n, a.grid));

    std::vector<gm::GpEstimate> ests;
    for (double p : a.p)
    {
        gm::EstimateOptions opts;
        opts.seed = a.seed;
        opts.restarts = a.restarts;
        opts.grid = grid.get();
        ests.push_back(gm::estimate_Gp(k, p, opts));
    }

    std::string text;
    if (a.format == "json")
    {
        Json arr = Json::array();
        for (auto const& e : ests)
            arr.push_back(gm::estimate_to_json(e));
        Json out = ests.size() == 1 ? arr[0] : Json{{"estimates", arr}};
        text = out.dump(2) + "\n";
    }
    else if (a.format == "csv")
    {
        text = "p,value,direction,status,witness_family,objective_at_K,objective_at_B\n";
        for (auto const& e : ests)
        {
            text += full_num(e.p) + "," + full_num(e.value) + "," + gm::to_string(e.direction)
                    + "," + e.status + "," + e.witness_family + ","
                    + full_num(e.objective_at_K) + "," + full_num(e.objective_at_B) + "\n";
        }
    }
    else
    {
        for (auto const& e : ests)
        {
            text += "p = " + plain_num(e.p) + ": " + plain_num(e.value) + " ("
                    + gm::to_string(e.direction) + " bound, " + e.status + ")\n";
            text += "  witness: " + e.witness_family + " " + e.witness.kind() + "\n";
            text += "  J(K) = " + plain_num(e.objective_at_K)
                    + ", J(B) = " + plain_num(e.objective_at_B) + "\n";
        }
    }
    write_text(a.out, text);
    return exit_ok;
}

//---------------------------------------------------------------------------//
// verify
//---------------------------------------------------------------------------//

struct VerifyArgs
{
    std::string config;
    std::string checks;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::string out;
    std::string replay;
};

gm::HarnessConfig load_config(std::string const& path)
{
    if (path.empty())
        return {};
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config '" + path + "'");
    Json j;
    try
    {
        j = Json::parse(in);
    }
    catch (Json::parse_error const& e)
    {
        throw UsageError(std::string("malformed config: ") + e.what());
    }
    try
    {
        return gm::config_from_json(j);
    }
    catch (gm::InputError const& e)
    {
        throw UsageError(std::string("invalid config: ") + e.what());
    }
}

int cmd_verify(VerifyArgs const& a)
{
    auto cfg = load_config(a.config);
    if (a.seed)
        cfg.seed = *a.seed;
    if (!a.checks.empty())
    {
        cfg.checks = split_list(a.checks);
        for (auto const& id : cfg.checks)
        {
            auto const& all = gm::all_checks();
            if (std::find(all.begin(), all.end(), id) == all.end())
                throw UsageError("unknown check '" + id + "'");
        }
    }

    if (!a.replay.empty())
    {
        std::ifstream in(a.replay);
        if (!in)
            throw UsageError("cannot open instance '" + a.replay + "'");
        Json inst;
        try
        {
            inst = Json::parse(in);
        }
        catch (Json::parse_error const& e)
        {
            throw UsageError(std::string("malformed instance: ") + e.what());
        }
        auto const res = gm::replay(inst, cfg);
        Json arr = Json::array();
        bool failed = false;
        for (auto const& r : res)
        {
            arr.push_back(gm::result_to_json(r));
            failed = failed || r.verdict == gm::Verdict::fail;
        }
        write_text(a.out, arr.dump(2) + "\n");
        return failed ? exit_check_failure : exit_ok;
    }

    auto const rep = gm::run_suite(cfg);
    std::string out = a.out;
    if (a.format == "json")
    {
        if (out.empty())
            out = "report.json";
        write_text(out, rep.to_json().dump(2) + "\n");
    }
    else if (a.format == "csv")
    {
        if (out.empty())
            out = "report.csv";
        write_text(out, rep.to_csv());
    }
    else
    {
        std::map<std::string, std::array<int, 3>> per;
        for (auto const& r : rep.results)
            ++per[r.check_id][static_cast<int>(r.verdict)];
        std::string text;
        for (auto const& [id, c] : per)
        {
            text += id + ": " + std::to_string(c[0]) + " pass, " + std::to_string(c[1])
                    + " fail, " + std::to_string(c[2]) + " inconclusive\n";
        }
        write_text(out, text);
    }
    std::cerr << "verify: " << rep.passes << " pass, " << rep.failures << " fail, "
              << rep.inconclusive << " inconclusive, " << rep.errors.size()
              << " errors (bm_constant " << plain_num(cfg.bm_constant) << ")\n";
    for (auto const& e : rep.errors)
        std::cerr << "  error: " << e << "\n";
    for (auto const& r : rep.results)
        if (r.verdict == gm::Verdict::fail)
            std::cerr << "  fail: " << r.instance_id << "#" << r.clause
                      << " margin " << full_num(r.margin) << "\n";
    return rep.failures > 0 ? exit_check_failure : exit_ok;
}

//---------------------------------------------------------------------------//
// generate
//---------------------------------------------------------------------------//

int cmd_generate(gm::RandomBodySpec const& spec, std::string const& out)
{
    auto const k = gm::random_body(spec);
    write_text(out, gm::body_to_json(k).dump(2) + "\n");
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"geominima: L_p geominimal surface areas of convex bodies"};
    app.require_subcommand(1);
    std::vector<std::string> const formats{"json", "csv", "plain"};

    ComputeArgs ca;
    auto* compute = app.add_subcommand("compute", "Evaluate functionals of a body");
    compute->add_option("--body", ca.body, "Body JSON file")->required()->check(CLI::ExistingFile);
    compute->add_option("--against", ca.against, "Second body Q for mixed volumes (default: unit ball)")
        ->check(CLI::ExistingFile);
    compute->add_option("--quantities", ca.quantities,
                        "Comma list of volume, polar_volume, mahler, centroid, "
                        "santalo_point, mixed_volume, p_surface_area, "
                        "affine_surface_area, in_vp, surface_measure");
    compute->add_option("--p", ca.p, "Values of p")->delimiter(',');
    compute->add_option("--grid", ca.grid, "Sphere grid resolution");
    compute->add_option("--format", ca.format)->check(CLI::IsMember(formats));
    compute->add_option("--out", ca.out, "Output file (default: stdout)");

    EstimateArgs ea;
    auto* estimate = app.add_subcommand("estimate", "Estimate the geominimal surface area");
    estimate->add_option("--body", ea.body, "Body JSON file")->required()->check(CLI::ExistingFile);
    estimate->add_option("--p", ea.p, "Values of p")->delimiter(',')->required();
    estimate->add_option("--grid", ea.grid, "Sphere grid resolution");
    estimate->add_option("--seed", ea.seed);
    estimate->add_option("--restarts", ea.restarts)->check(CLI::PositiveNumber);
    estimate->add_option("--format", ea.format)->check(CLI::IsMember(formats));
    estimate->add_option("--out", ea.out, "Output file (default: stdout)");

    VerifyArgs va;
    std::uint64_t seed_value = 0;
    auto* verify = app.add_subcommand("verify", "Run the inequality suite");
    verify->add_option("--config", va.config, "Harness config JSON");
    verify->add_option("--checks", va.checks, "Comma list of check ids");
    auto* seed_opt = verify->add_option("--seed", seed_value);
    verify->add_option("--format", va.format)->check(CLI::IsMember(formats));
    verify->add_option("--out", va.out, "Report file (default: report.json / report.csv)");
    verify->add_option("--replay", va.replay, "Re-run one serialized instance")
        ->check(CLI::ExistingFile);

    gm::RandomBodySpec gs;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a random body as JSON");
    generate->add_option("--kind", gs.kind)
        ->check(CLI::IsMember({"polytope-hull", "ellipsoid", "fourier2d", "shifted-ball"}));
    generate->add_option("--dim", gs.dim);
    generate->add_option("--size", gs.size);
    generate->add_option("--seed", gs.seed);
    generate->add_option("--out", gen_out, "Output file (default: stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*compute)
            return cmd_compute(ca);
        if (*estimate)
            return cmd_estimate(ea);
        if (*verify)
        {
            if (*seed_opt)
                va.seed = seed_value;
            return cmd_verify(va);
        }
        return cmd_generate(gs, gen_out);
    }
    catch (UsageError const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (gm::InputError const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (gm::Error const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
