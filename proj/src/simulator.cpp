#include "hierstab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace hierstab {

namespace {

// Stepping workspace: node coordinates and Q-independent rate caches are
// computed once, so repeated stepping only re-evaluates Q-dependent rates.
class Engine {
public:
    Engine(const ModelSpec& model, const Grid& g)
        : model_(model), g_(g), s_(g.num_nodes()),
          gamma_qfree_(!model.gamma.uses(Var::Q)), mu_qfree_(!model.mu.uses(Var::Q)),
          beta_qfree_(!model.beta.uses(Var::Q)),
          gam_(g.num_nodes()), mu_(g.num_nodes()), beta_(g.num_nodes()), w_(g.num_nodes()) {
        for (int i = 0; i <= g.n(); ++i) {
            s_[i] = g.node(i);
            w_[i] = model.w.eval(s_[i], 0.0);
        }
        if (gamma_qfree_)
            for (int i = 0; i <= g.n(); ++i) gam_[i] = checked_gamma(i, 0.0);
        if (mu_qfree_)
            for (int i = 0; i <= g.n(); ++i) mu_[i] = model.mu.eval(s_[i], 0.0);
        if (beta_qfree_)
            for (int i = 0; i <= g.n(); ++i) beta_[i] = model.beta.eval(s_[i], 0.0);
    }

    void refresh_rates(const std::vector<double>& Q, bool parallel) {
        const int nn = g_.num_nodes();
        if (!gamma_qfree_) {
#pragma omp parallel for if (parallel) schedule(static)
            for (int i = 0; i < nn; ++i) gam_[i] = checked_gamma(i, Q[i]);
        }
        if (!mu_qfree_) {
#pragma omp parallel for if (parallel) schedule(static)
            for (int i = 0; i < nn; ++i) mu_[i] = model_.mu.eval(s_[i], Q[i]);
        }
        if (!beta_qfree_) {
#pragma omp parallel for if (parallel) schedule(static)
            for (int i = 0; i < nn; ++i) beta_[i] = model_.beta.eval(s_[i], Q[i]);
        }
    }

    double inflow(const std::vector<double>& u) const {
        const int n = g_.n();
        double sum = 0.5 * (beta_[0] * u[0] + beta_[n] * u[n]);
        for (int i = 1; i < n; ++i) sum += beta_[i] * u[i];
        return sum * g_.h();
    }

    double max_gamma() const { return *std::max_element(gam_.begin(), gam_.end()); }

    double cfl_dt() const { return model_.simulation.cfl * g_.h() / max_gamma(); }

    // One upwind step; rates must match Q (call refresh_rates first).
    void advance(std::vector<double>& u, std::vector<double>& Q, double dt, double t,
                 bool parallel) const {
        const int n = g_.n();
        const double h = g_.h();
        const double b0 = inflow(u);
        std::vector<double> next(n + 1);
        next[0] = b0;  // nonlocal boundary condition u(0) = int beta u
#pragma omp parallel for if (parallel) schedule(static)
        for (int i = 1; i <= n; ++i)
            next[i] = u[i] - dt / h * (gam_[i] * u[i] - gam_[i - 1] * u[i - 1]) - dt * mu_[i] * u[i];
        for (int i = 0; i <= n; ++i)
            if (!std::isfinite(next[i])) throw BlowUp("simulation blow-up at t=" + std::to_string(t), t);
        u.swap(next);
        recompute_environment(u, Q);
    }

    void recompute_environment(const std::vector<double>& u, std::vector<double>& Q) const {
        const int n = g_.n();
        const double h = g_.h();
        // alpha * int_0^s wu + int_s^m wu, trapezoid prefix sums
        double up = 0.0;
        std::vector<double> ups(n + 1);
        ups[0] = 0.0;
        for (int i = 1; i <= n; ++i) {
            up += 0.5 * (w_[i - 1] * u[i - 1] + w_[i] * u[i]) * h;
            ups[i] = up;
        }
        for (int i = 0; i <= n; ++i) Q[i] = model_.alpha * ups[i] + (up - ups[i]);
    }

private:
    const ModelSpec& model_;
    Grid g_;
    std::vector<double> s_;
    bool gamma_qfree_, mu_qfree_, beta_qfree_;
    std::vector<double> gam_, mu_, beta_, w_;

    double checked_gamma(int i, double q) const {
        const double v = model_.gamma.eval(s_[i], q);
        if (!(v > 0.0))
            throw ModelError("simulator: gamma <= 0 at s=" + std::to_string(s_[i]));
        return v;
    }
};

double l1_diff(const std::vector<double>& a, const std::vector<double>& b, double h) {
    const int n = static_cast<int>(a.size()) - 1;
    double sum = 0.5 * (std::fabs(a[0] - b[0]) + std::fabs(a[n] - b[n]));
    for (int i = 1; i < n; ++i) sum += std::fabs(a[i] - b[i]);
    return sum * h;
}

}  // namespace

SimState make_state(const ModelSpec& model, const GridFunction& u0) {
    if (u0.grid() != model.grid())
        throw std::domain_error("make_state: initial density not on the model grid");
    GridFunction w(model.grid(), [&](double s) { return model.w.eval(s, 0.0); });
    GridFunction Q = environment(u0, model.alpha, w);
    return SimState{0.0, u0, std::move(Q), 0.0};
}

SimState step(const ModelSpec& model, const SimState& state, std::optional<double> dt,
              bool parallel) {
    Engine eng(model, state.u.grid());
    std::vector<double> u = state.u.values();
    std::vector<double> Q = state.Q.values();
    eng.refresh_rates(Q, parallel);
    const double step_dt = dt.value_or(eng.cfl_dt());
    eng.advance(u, Q, step_dt, state.t, parallel);
    return SimState{state.t + step_dt, GridFunction(state.u.grid(), std::move(u)),
                    GridFunction(state.u.grid(), std::move(Q)), step_dt};
}

SimState step_serial(const ModelSpec& model, const SimState& state, std::optional<double> dt) {
    return step(model, state, dt, false);
}

double boundary_inflow(const ModelSpec& model, const SimState& state) {
    const Grid& g = state.u.grid();
    std::vector<double> f(g.num_nodes());
    for (int i = 0; i <= g.n(); ++i)
        f[i] = model.beta.eval(g.node(i), state.Q[i]) * state.u[i];
    return integrate(GridFunction(g, std::move(f)));
}

double cfl_dt(const ModelSpec& model, const SimState& state) {
    Engine eng(model, state.u.grid());
    std::vector<double> Q = state.Q.values();
    eng.refresh_rates(Q, false);
    return eng.cfl_dt();
}

RateMeasurement measure_rate(const ModelSpec& model, const Equilibrium& eq,
                             const GridFunction& v0, double eps, double T) {
    const Grid& g = eq.u_star.grid();
    if (v0.grid() != g) throw std::domain_error("measure_rate: v0 not on the model grid");
    if (v0.max_abs() == 0.0) throw std::domain_error("measure_rate: v0 must not vanish");
    Engine eng(model, g);

    std::vector<double> ua = eq.u_star.values();
    std::vector<double> ub = ua;
    for (int i = 0; i <= g.n(); ++i) ub[i] += eps * v0[i];
    std::vector<double> Qa(g.num_nodes()), Qb(g.num_nodes());
    eng.recompute_environment(ua, Qa);
    eng.recompute_environment(ub, Qb);

    RateMeasurement out{};
    out.samples.push_back({0.0, l1_diff(ua, ub, g.h())});
    double t = 0.0;
    double next_sample = T / 400.0;
    bool blew_up = false;
    try {
        while (t < T) {
            // lockstep dt so the trajectories stay time-aligned
            eng.refresh_rates(Qa, true);
            double dt = eng.cfl_dt();
            eng.advance(ua, Qa, dt, t, true);
            eng.refresh_rates(Qb, true);
            eng.advance(ub, Qb, dt, t, true);
            t += dt;
            if (t >= next_sample || t >= T) {
                out.samples.push_back({t, l1_diff(ua, ub, g.h())});
                next_sample += T / 400.0;
            }
        }
    } catch (const BlowUp&) {
        blew_up = true;  // partial record still carries the growth trend
    }

    // usable record ends where the signal drops below resolution
    double t_end = out.samples.back().t;
    for (const auto& smp : out.samples) {
        if (smp.norm < 1e-12) {
            t_end = smp.t;
            break;
        }
    }
    double t_lo = 0.5 * t_end;
    auto usable = [&](const RateSample& smp) {
        return smp.t >= t_lo && smp.t <= t_end && smp.norm >= 1e-12;
    };
    int count = static_cast<int>(std::count_if(out.samples.begin(), out.samples.end(), usable));
    if (count < 4) t_lo = 0.1 * t_end;  // heavily truncated record: widen the fit window

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& smp : out.samples) {
        if (!usable(smp)) continue;
        const double y = std::log(smp.norm);
        sx += smp.t;
        sy += y;
        sxx += smp.t * smp.t;
        sxy += smp.t * y;
        ++n;
    }
    if (n < 2) {
        if (blew_up) {
            out.rate = std::numeric_limits<double>::infinity();
            out.fit_t_lo = t_lo;
            out.fit_t_hi = t_end;
            return out;
        }
        throw NonConvergence("measure_rate: too few usable samples for a fit", T);
    }
    out.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.fit_t_lo = t_lo;
    out.fit_t_hi = t_end;
    if (blew_up && out.rate < 0.0) out.rate = std::numeric_limits<double>::infinity();
    return out;
}

void write_trajectory_csv(const std::string& path, const ModelSpec& model,
                          const GridFunction& u0, double T, int snapshots) {
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot open " + path);
    csv << "t,s,u\n";
    const Grid& g = u0.grid();
    Engine eng(model, g);
    std::vector<double> u = u0.values();
    std::vector<double> Q(g.num_nodes());
    eng.recompute_environment(u, Q);
    auto dump = [&](double t) {
        for (int i = 0; i <= g.n(); ++i)
            csv << t << ',' << g.node(i) << ',' << u[i] << '\n';
    };
    dump(0.0);
    double t = 0.0;
    int written = 1;
    while (t < T && written <= snapshots) {
        const double target = T * written / snapshots;
        while (t < target) {
            eng.refresh_rates(Q, true);
            const double dt = eng.cfl_dt();
            eng.advance(u, Q, dt, t, true);
            t += dt;
        }
        dump(t);
        ++written;
    }
}

void write_rate_csv(const std::string& path, const RateMeasurement& m) {
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot open " + path);
    csv << "t,norm_L1_diff\n";
    for (const auto& smp : m.samples) csv << smp.t << ',' << smp.norm << '\n';
}

}  // namespace hierstab
