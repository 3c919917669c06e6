#include "hierstab/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hierstab {

void ModelSpec::validate() const {
    if (!(m > 0.0)) throw ModelError("model: m must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ModelError("model: alpha must lie in [0, 1]");
    if (!(q_validation_max >= 0.0)) throw ModelError("model: q_validation_max must be >= 0");
    if (w.uses(Var::Q)) throw ModelError("model: weight w may depend on s only");
    Grid g = grid();
    const int q_samples = 41;
    for (int i = 0; i <= g.n(); ++i) {
        const double s = g.node(i);
        if (!(w.eval(s, 0.0) > 0.0))
            throw ModelError("model: w must be positive (violated at s=" + std::to_string(s) + ")");
        for (int j = 0; j < q_samples; ++j) {
            const double q = q_validation_max * j / (q_samples - 1);
            if (!(gamma.eval(s, q) > 0.0))
                throw ModelError("model: gamma must be positive (violated at s=" +
                                 std::to_string(s) + ", Q=" + std::to_string(q) + ")");
            if (!(mu.eval(s, q) >= 0.0))
                throw ModelError("model: mu must be non-negative (violated at s=" +
                                 std::to_string(s) + ", Q=" + std::to_string(q) + ")");
            if (!(beta.eval(s, q) >= 0.0))
                throw ModelError("model: beta must be non-negative (violated at s=" +
                                 std::to_string(s) + ", Q=" + std::to_string(q) + ")");
        }
    }
}

ModelSpec parse_model(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("model file: ") + e.what());
    }
    auto expr_field = [&](const char* key) {
        if (!j.contains(key)) throw ModelError(std::string("model file: missing key '") + key + "'");
        try {
            return Expr::parse(j.at(key).get<std::string>());
        } catch (const ParseError& e) {
            throw ModelError(std::string("model file: in '") + key + "': " + e.what());
        }
    };
    ModelSpec spec{
        .m = 0.0,
        .alpha = 0.0,
        .w = expr_field("w"),
        .beta = expr_field("beta"),
        .gamma = expr_field("gamma"),
        .mu = expr_field("mu"),
    };
    for (const char* key : {"m", "alpha", "q_validation_max"})
        if (!j.contains(key)) throw ModelError(std::string("model file: missing key '") + key + "'");
    spec.m = j.at("m").get<double>();
    spec.alpha = j.at("alpha").get<double>();
    spec.q_validation_max = j.at("q_validation_max").get<double>();
    spec.grid_n = j.value("grid_n", 2048);
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        spec.solver.theta = s.value("theta", spec.solver.theta);
        spec.solver.fp_tol = s.value("fp_tol", spec.solver.fp_tol);
        spec.solver.fp_max_iter = s.value("fp_max_iter", spec.solver.fp_max_iter);
        spec.solver.bisect_tol = s.value("bisect_tol", spec.solver.bisect_tol);
        spec.solver.scan_points = s.value("scan_points", spec.solver.scan_points);
    }
    if (j.contains("simulation"))
        spec.simulation.cfl = j.at("simulation").value("cfl", spec.simulation.cfl);
    spec.validate();
    return spec;
}

ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("model file: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

}  // namespace hierstab
