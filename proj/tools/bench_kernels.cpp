// Timing comparison of the OpenMP transport kernel against the serial
// reference path, plus a bit-identity check between the two.
//
// Usage: bench_kernels [model-file] [grid-n] [steps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hierstab/equilibrium.hpp"
#include "hierstab/model.hpp"
#include "hierstab/simulator.hpp"

using namespace hierstab;
using clk = std::chrono::steady_clock;

static double run(const ModelSpec& model, SimState state, int steps, bool parallel) {
    auto t0 = clk::now();
    for (int k = 0; k < steps; ++k)
        state = parallel ? step(model, state) : step_serial(model, state);
    return std::chrono::duration<double>(clk::now() - t0).count();
}

int main(int argc, char** argv) {
    std::string path = argc > 1 ? argv[1] : "models/sec5.model";
    int grid_n = argc > 2 ? std::atoi(argv[2]) : 8192;
    int steps = argc > 3 ? std::atoi(argv[3]) : 2000;

    ModelSpec model = load_model(path);
    model.grid_n = grid_n;
    model.validate();

    const Grid g = model.grid();
    GridFunction u0(g, [&](double s) { return 1.0 + 0.2 * s / g.m(); });
    SimState s0 = make_state(model, u0);

    // warm-up + correctness: the two paths must agree to the last bit
    SimState a = s0, b = s0;
    for (int k = 0; k < 10; ++k) {
        a = step(model, a);
        b = step_serial(model, b);
    }
    for (int i = 0; i <= g.n(); ++i) {
        if (a.u[i] != b.u[i]) {
            std::fprintf(stderr, "FAIL: parallel and serial states differ at node %d\n", i);
            return 1;
        }
    }

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    double t_ser = run(model, s0, steps, false);
    double t_par = run(model, s0, steps, true);

    std::printf("model=%s  n=%d  steps=%d  threads=%d\n", path.c_str(), grid_n, steps, threads);
    std::printf("serial:   %8.3f s  (%.1f Mnode-updates/s)\n", t_ser,
                steps * double(grid_n) / t_ser / 1e6);
    std::printf("parallel: %8.3f s  (%.1f Mnode-updates/s)\n", t_par,
                steps * double(grid_n) / t_par / 1e6);
    std::printf("speedup:  %8.2fx\n", t_ser / t_par);
    return 0;
}
