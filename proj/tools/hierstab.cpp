// Batch front-end: load a model file, run a pipeline stage, emit JSON reports
// on stdout (CSV artifacts per flags). Exit codes: 0 success, 2 model error,
// 3 non-convergence, 4 internal consistency alarm, 64 usage error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "hierstab/conditions.hpp"
#include "hierstab/equilibrium.hpp"
#include "hierstab/linearization.hpp"
#include "hierstab/model.hpp"
#include "hierstab/simulator.hpp"
#include "hierstab/spectral_general.hpp"
#include "hierstab/spectral_special.hpp"
#include "hierstab/validate.hpp"

using nlohmann::json;
using namespace hierstab;

namespace {

constexpr int kSchemaVersion = 1;

json grid_function_json(const GridFunction& f) { return json(f.values()); }

json equilibrium_json(const Equilibrium& eq) {
    return json{{"b", eq.b},
                {"net_reproduction_residual", eq.net_reproduction_residual},
                {"fixed_point_iterations", eq.fixed_point_iterations},
                {"u_star", grid_function_json(eq.u_star)},
                {"Q_star", grid_function_json(eq.Q_star)}};
}

json condition_json(const ConditionReport& rep) {
    json j{{"holds", rep.holds}, {"margin", rep.margin}, {"worst_node", rep.worst_node}};
    for (const auto& [k, v] : rep.aux) j[k] = v;
    return j;
}

json report_shell(const std::string& command, const std::string& model_path,
                  const ModelSpec& model) {
    return json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"model", model_path},
                {"metadata", json{{"m", model.m}, {"alpha", model.alpha}, {"grid_n", model.grid_n}}}};
}

struct Options {
    std::string model_path;
    std::string out_dir;
    int grid_n = 0;
    double b_lo = 0.0, b_hi = 10.0;
    std::vector<double> search;
    std::vector<double> rect{-3.0, 1.0, -10.0, 10.0};
    double T = 20.0;
    double eps = 0.0;
    double force_b = -1.0;
};

ModelSpec load(const Options& opt) {
    ModelSpec model = load_model(opt.model_path);
    if (opt.grid_n > 0) {
        model.grid_n = opt.grid_n;
        model.validate();
    }
    return model;
}

int cmd_equilibrium(const Options& opt) {
    ModelSpec model = load(opt);
    auto eqs = solve_equilibrium(model, opt.b_lo, opt.b_hi);
    json rep = report_shell("equilibrium", opt.model_path, model);
    rep["equilibria"] = json::array();
    for (const auto& eq : eqs) rep["equilibria"].push_back(equilibrium_json(eq));
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_classify(const Options& opt) {
    ModelSpec model = load(opt);
    auto eqs = solve_equilibrium(model, opt.b_lo, opt.b_hi);
    json rep = report_shell("classify", opt.model_path, model);
    rep["results"] = json::array();
    for (const auto& eq : eqs) {
        if (!eq.positive()) continue;
        LinearizedCoefficients c = linearize(model, eq);
        json item{{"b", eq.b}};
        if (!c.sigma_vanishes()) {
            item["error"] = "sigma* != 0: explicit characteristic function not applicable";
        } else {
            StabilityVerdict v = classify_special(c);
            item["verdict"] = to_string(v.verdict);
            item["criterion"] = v.criterion;
            for (const auto& [k, val] : v.evidence) item[k] = val;
            if (opt.search.size() == 2) {
                if (auto root = dominant_root(c, opt.search[0], opt.search[1]))
                    item["dominant_root"] = *root;
            }
        }
        rep["results"].push_back(std::move(item));
    }
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_spectrum(const Options& opt) {
    ModelSpec model = load(opt);
    auto eqs = solve_equilibrium(model, opt.b_lo, opt.b_hi);
    ComplexRect rect{opt.rect[0], opt.rect[1], opt.rect[2], opt.rect[3]};
    json rep = report_shell("spectrum", opt.model_path, model);
    rep["results"] = json::array();
    for (const auto& eq : eqs) {
        if (!eq.positive()) continue;
        LinearizedCoefficients c = linearize(model, eq);
        SpectrumReport sr = find_roots(c, rect);
        json roots = json::array();
        for (const auto& r : sr.roots)
            roots.push_back(json{{"re", r.lambda.real()}, {"im", r.lambda.imag()},
                                 {"residual", r.residual}});
        rep["results"].push_back(json{
            {"b", eq.b},
            {"roots", std::move(roots)},
            {"spectral_bound_estimate",
             std::isfinite(sr.spectral_bound_estimate) ? json(sr.spectral_bound_estimate)
                                                       : json(nullptr)},
            {"search_region", json{rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi}},
            {"complete", sr.complete},
            {"method", json{{"determinant_evaluations", sr.determinant_evaluations},
                            {"newton_iterations", sr.newton_iterations},
                            {"alpha1_reduction", model.alpha == 1.0}}}});
    }
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_conditions(const Options& opt) {
    ModelSpec model = load(opt);
    json rep = report_shell("conditions", opt.model_path, model);
    rep["trivial"] = condition_json(check_trivial(model));
    rep["results"] = json::array();
    auto eqs = solve_equilibrium(model, opt.b_lo, opt.b_hi);
    for (const auto& eq : eqs) {
        if (!eq.positive()) continue;
        LinearizedCoefficients c = linearize(model, eq);
        auto [pos1, pos2] = check_positivity(c);
        json item{{"b", eq.b},
                  {"positivity_sigma", condition_json(pos1)},
                  {"positivity_fertility", condition_json(pos2)},
                  {"dissipativity", condition_json(check_dissipativity(c))}};
        if (model.alpha == 1.0) item["scramble"] = condition_json(check_scramble(c));
        rep["results"].push_back(std::move(item));
    }
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const Options& opt) {
    ModelSpec model = load(opt);
    auto eqs = solve_equilibrium(model, opt.b_lo, opt.b_hi);
    const Equilibrium* target = &eqs.front();  // trivial unless a positive one exists
    for (const auto& eq : eqs)
        if (eq.positive()) {
            target = &eq;
            break;
        }
    const Grid g = model.grid();
    GridFunction v0(g, [&](double s) { return std::sin(M_PI * s / g.m()); });
    double eps = opt.eps;
    if (eps <= 0.0) eps = target->positive() ? 1e-4 * integrate(target->u_star) : 1e-4;
    RateMeasurement m = measure_rate(model, *target, v0, eps, opt.T);
    json rep = report_shell("simulate", opt.model_path, model);
    rep["b"] = target->b;
    rep["eps"] = eps;
    rep["T"] = opt.T;
    rep["rate"] = std::isfinite(m.rate) ? json(m.rate) : json(nullptr);
    rep["blow_up"] = !std::isfinite(m.rate);
    rep["fit_window"] = json{m.fit_t_lo, m.fit_t_hi};
    if (!opt.out_dir.empty()) {
        write_rate_csv(opt.out_dir + "/rate.csv", m);
        std::vector<double> u0 = target->u_star.values();
        for (int i = 0; i <= g.n(); ++i) u0[i] += eps * v0[i];
        write_trajectory_csv(opt.out_dir + "/trajectory.csv", model, GridFunction(g, u0),
                             opt.T, 40);
        rep["artifacts"] = json{opt.out_dir + "/rate.csv", opt.out_dir + "/trajectory.csv"};
    }
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_validate(const Options& opt) {
    ModelSpec model = load(opt);
    ValidateOptions vopts;
    vopts.b_lo = opt.b_lo;
    vopts.b_hi = opt.b_hi;
    if (opt.force_b >= 0.0) vopts.force_b = opt.force_b;
    vopts.rect = ComplexRect{opt.rect[0], opt.rect[1], opt.rect[2], opt.rect[3]};
    vopts.sim_T = opt.T;
    vopts.sim_eps = opt.eps;
    auto results = validate_model(model, vopts);
    json rep = report_shell("validate", opt.model_path, model);
    rep["results"] = json::array();
    bool any_alarm = false, all_agree = true;
    for (const auto& res : results) {
        json routes = json::array();
        for (const auto& r : res.routes) {
            json jr{{"route", r.name}, {"detail", r.detail}};
            if (r.growth_rate && std::isfinite(*r.growth_rate)) jr["growth_rate"] = *r.growth_rate;
            if (r.stable.has_value()) jr["stable"] = *r.stable;
            routes.push_back(std::move(jr));
        }
        rep["results"].push_back(json{{"b", res.equilibrium.b},
                                      {"routes", std::move(routes)},
                                      {"alarm", res.alarm},
                                      {"agree", res.agree}});
        any_alarm = any_alarm || res.alarm;
        all_agree = all_agree && res.agree;
    }
    rep["alarm"] = any_alarm;
    rep["agree"] = all_agree;
    std::cout << rep.dump(2) << "\n";
    return (any_alarm || !all_agree) ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("HIERSTAB_THREADS")) {
#ifdef _OPENMP
        omp_set_num_threads(std::max(1, std::atoi(threads)));
#endif
    }

    CLI::App app{"Equilibria and linear stability of hierarchical size-structured populations"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", opt.model_path, "model file (JSON)")->required();
        sub->add_option("--out", opt.out_dir, "directory for CSV artifacts");
        sub->add_option("--grid-n", opt.grid_n, "override the model grid resolution");
        sub->add_option("--b-lo", opt.b_lo, "lower end of the birth-level search range");
        sub->add_option("--b-hi", opt.b_hi, "upper end of the birth-level search range");
        return sub;
    };

    add_common(app.add_subcommand("equilibrium", "compute stationary solutions"));
    auto* classify = add_common(app.add_subcommand("classify", "fertility-monotonicity verdict"));
    classify->add_option("--search", opt.search, "root search window LO,HI")
        ->delimiter(',')
        ->expected(2);
    auto* spectrum = add_common(app.add_subcommand("spectrum", "determinant-route eigenvalues"));
    spectrum->add_option("--rect", opt.rect, "search rectangle RE0,RE1,IM0,IM1")
        ->delimiter(',')
        ->expected(4);
    add_common(app.add_subcommand("conditions", "positivity/dissipativity/trivial checks"));
    auto* simulate = add_common(app.add_subcommand("simulate", "time-domain perturbation rate"));
    simulate->add_option("--T", opt.T, "simulation horizon");
    simulate->add_option("--eps", opt.eps, "perturbation amplitude");
    auto* validate = add_common(app.add_subcommand("validate", "cross-route consistency"));
    validate->add_option("--rect", opt.rect, "search rectangle RE0,RE1,IM0,IM1")
        ->delimiter(',')
        ->expected(4);
    validate->add_option("--T", opt.T, "simulation horizon (0 disables)");
    validate->add_option("--eps", opt.eps, "perturbation amplitude");
    validate->add_option("--force-b", opt.force_b,
                         "treat this birth level as an equilibrium without solving R(Q*)=1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (app.got_subcommand("equilibrium")) return cmd_equilibrium(opt);
        if (app.got_subcommand("classify")) return cmd_classify(opt);
        if (app.got_subcommand("spectrum")) return cmd_spectrum(opt);
        if (app.got_subcommand("conditions")) return cmd_conditions(opt);
        if (app.got_subcommand("simulate")) return cmd_simulate(opt);
        if (app.got_subcommand("validate")) return cmd_validate(opt);
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 64;
}
