#include "hierstab/spectral_general.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace hierstab {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Linear interpolation that tolerates the last-node rounding of s = m.
double interp(const GridFunction& f, double s) {
    const double m = f.grid().m();
    if (s >= m) return f[f.grid().n()];
    if (s <= 0.0) return f[0];
    return f(s);
}

void require_subcritical(const LinearizedCoefficients& c) {
    if (c.alpha >= 1.0)
        throw WrongRegime("second-order determinant requires alpha in [0,1); "
                          "use the scramble determinant for alpha = 1");
}

template <class State, class Rhs>
std::vector<State> rk4(const Rhs& rhs, State y0, double m, int steps) {
    std::vector<State> out;
    out.reserve(steps + 1);
    out.push_back(y0);
    const double h = m / steps;
    State y = y0;
    for (int k = 0; k < steps; ++k) {
        const double s = k * h;
        State k1 = rhs(s, y);
        State k2 = rhs(s + 0.5 * h, y + k1 * (0.5 * h));
        State k3 = rhs(s + 0.5 * h, y + k2 * (0.5 * h));
        State k4 = rhs(s + h, y + k3 * h);
        y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        out.push_back(y);
    }
    return out;
}

struct State2 {
    Complex v, w;
    State2 operator+(const State2& o) const { return {v + o.v, w + o.w}; }
    State2 operator*(double a) const { return {v * a, w * a}; }
};

// trapezoid over the integration nodes
Complex trapz(const std::vector<Complex>& f, double m) {
    const int n = static_cast<int>(f.size()) - 1;
    Complex sum = 0.5 * (f.front() + f.back());
    for (int i = 1; i < n; ++i) sum += f[i];
    return sum * (m / n);
}

}  // namespace

FundamentalPair fundamental_solutions(const LinearizedCoefficients& c, Complex lambda, int steps) {
    require_subcritical(c);
    if (steps <= 0) steps = c.grid().n();
    const double m = c.grid().m();

    auto rhs = [&](double s, const State2& y) -> State2 {
        const double gam = interp(c.gamma_star, s);
        const double w = interp(c.w, s);
        const Complex p = (interp(c.rho_star, s) + lambda) / gam - interp(c.w_prime, s) / w;
        const double q = (c.alpha - 1.0) * w * interp(c.sigma_star, s) / gam;
        return {y.w, -p * y.w - q * y.v};
    };

    FundamentalPair fp;
    fp.steps = steps;
    auto tr1 = rk4(rhs, State2{1.0, 0.0}, m, steps);
    auto tr2 = rk4(rhs, State2{0.0, 1.0}, m, steps);
    fp.V1.reserve(steps + 1);
    for (auto& y : tr1) {
        if (!finite(y.v) || !finite(y.w))
            throw std::overflow_error("fundamental_solutions: state overflow (lambda outside usable region)");
        fp.V1.push_back(y.v);
        fp.V1p.push_back(y.w);
    }
    for (auto& y : tr2) {
        if (!finite(y.v) || !finite(y.w))
            throw std::overflow_error("fundamental_solutions: state overflow (lambda outside usable region)");
        fp.V2.push_back(y.v);
        fp.V2p.push_back(y.w);
    }
    return fp;
}

Complex char_determinant(const LinearizedCoefficients& c, Complex lambda, int steps) {
    FundamentalPair fp = fundamental_solutions(c, lambda, steps);
    const int N = fp.steps;
    const double m = c.grid().m();
    const double w0 = c.w[0];

    std::vector<Complex> f1(N + 1), f2(N + 1), g1(N + 1), g2(N + 1);
    for (int k = 0; k <= N; ++k) {
        const double s = m * k / N;
        const double bw = w0 / interp(c.w, s) * interp(c.beta_star, s);
        const double bqu = interp(c.betaQ_u, s);
        f1[k] = bw * fp.V1p[k];
        f2[k] = bw * fp.V2p[k];
        g1[k] = bqu * fp.V1[k];
        g2[k] = bqu * fp.V2[k];
    }
    const Complex H1 = fp.V1p[0] - trapz(f1, m) - (c.alpha - 1.0) * w0 * trapz(g1, m);
    const Complex H2 = fp.V2p[0] - trapz(f2, m) - (c.alpha - 1.0) * w0 * trapz(g2, m);
    const Complex J1 = c.alpha * fp.V1[0] - fp.V1.back();
    const Complex J2 = c.alpha * fp.V2[0] - fp.V2.back();
    return H1 * J2 - H2 * J1;
}

Complex char_determinant_alpha1(const LinearizedCoefficients& c, Complex lambda, int steps) {
    if (c.alpha != 1.0) throw WrongRegime("char_determinant_alpha1 requires alpha = 1");
    if (steps <= 0) steps = c.grid().n();
    const double m = c.grid().m();

    // a: homogeneous first-order solution, b: particular with forcing -sigma*/gamma*
    auto rhs = [&](double s, const State2& y) -> State2 {
        const double gam = interp(c.gamma_star, s);
        const Complex r = (lambda + interp(c.rho_star, s)) / gam;
        return {-r * y.v, -r * y.w - interp(c.sigma_star, s) / gam};
    };
    auto tr = rk4(rhs, State2{1.0, 0.0}, m, steps);
    std::vector<Complex> wa(steps + 1), wb(steps + 1), ba(steps + 1), bb(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        if (!finite(tr[k].v) || !finite(tr[k].w))
            throw std::overflow_error("char_determinant_alpha1: state overflow");
        const double s = m * k / steps;
        const double w = interp(c.w, s);
        const double bet = interp(c.beta_star, s);
        wa[k] = w * tr[k].v;
        wb[k] = w * tr[k].w;
        ba[k] = bet * tr[k].v;
        bb[k] = bet * tr[k].w;
    }
    const double bqu_total = integrate(c.betaQ_u);
    return trapz(wa, m) * (trapz(bb, m) + bqu_total) -
           (trapz(wb, m) - 1.0) * (trapz(ba, m) - 1.0);
}

Complex determinant(const LinearizedCoefficients& c, Complex lambda, int steps) {
    return c.alpha == 1.0 ? char_determinant_alpha1(c, lambda, steps)
                          : char_determinant(c, lambda, steps);
}

namespace {

struct BoundarySample {
    double t;  // position along the boundary path in [0, 4)
    Complex z, f;
};

class WindingCounter {
public:
    WindingCounter(std::function<Complex(Complex)> f, const ComplexRect& r)
        : f_(std::move(f)), rect_(r) {}

    Complex point(double t) const {
        // counterclockwise: bottom, right, top, left
        const double frac = t - std::floor(t);
        switch (static_cast<int>(std::floor(t)) % 4) {
            case 0: return {rect_.re_lo + frac * rect_.width(), rect_.im_lo};
            case 1: return {rect_.re_hi, rect_.im_lo + frac * rect_.height()};
            case 2: return {rect_.re_hi - frac * rect_.width(), rect_.im_hi};
            default: return {rect_.re_lo, rect_.im_hi - frac * rect_.height()};
        }
    }

    int run(int initial_per_side, int* evals) {
        std::vector<BoundarySample> samples(4 * initial_per_side + 1);
#pragma omp parallel for schedule(dynamic)
        for (int k = 0; k <= 4 * initial_per_side; ++k) {
            const double t = 4.0 * k / (4.0 * initial_per_side);
            const Complex z = point(t);
            samples[k] = {t, z, f_(z)};
        }
        if (evals) *evals += 4 * initial_per_side + 1;
        double phase = 0.0;
        for (std::size_t k = 0; k + 1 < samples.size(); ++k)
            phase += segment_phase(samples[k], samples[k + 1], 0, evals);
        check_scale();
        return static_cast<int>(std::lround(phase / (2.0 * M_PI)));
    }

private:
    std::function<Complex(Complex)> f_;
    ComplexRect rect_;
    double max_abs_ = 0.0;
    double min_abs_ = std::numeric_limits<double>::infinity();

    void record(Complex f) {
        max_abs_ = std::max(max_abs_, std::abs(f));
        min_abs_ = std::min(min_abs_, std::abs(f));
    }

    void check_scale() const {
        if (min_abs_ <= 1e-10 * max_abs_)
            throw std::runtime_error("count_roots: determinant nearly vanishes on the rectangle "
                                     "boundary; perturb the rectangle");
    }

    double segment_phase(const BoundarySample& a, const BoundarySample& b, int depth, int* evals) {
        record(a.f);
        record(b.f);
        const double dphi = std::arg(b.f / a.f);
        if (std::abs(dphi) < M_PI / 2.0 || depth >= 42) return dphi;
        const double tm = 0.5 * (a.t + b.t);
        const Complex zm = point(tm);
        BoundarySample mid{tm, zm, f_(zm)};
        if (evals) ++*evals;
        return segment_phase(a, mid, depth + 1, evals) + segment_phase(mid, b, depth + 1, evals);
    }
};

}  // namespace

int count_roots(const LinearizedCoefficients& c, const ComplexRect& rect) {
    WindingCounter wc([&](Complex z) { return determinant(c, z); }, rect);
    return wc.run(64, nullptr);
}

SpectrumReport find_roots(const LinearizedCoefficients& c, const ComplexRect& rect, int max_roots) {
    auto D = [&](Complex z) { return determinant(c, z); };
    SpectrumReport report;
    report.search_region = rect;
    std::atomic<int> evals{0};

    // boundary scale for residual thresholds
    double scale = 0.0;
    {
        WindingCounter wc(D, rect);
        for (int k = 0; k < 64; ++k) scale = std::max(scale, std::abs(D(wc.point(4.0 * k / 64))));
        evals += 64;
    }
    if (scale == 0.0) scale = 1.0;
    const double tol = 1e-8 * scale;

    std::function<int(const ComplexRect&)> robust_count = [&](const ComplexRect& r) {
        ComplexRect probe = r;
        const double jitter_re = 1e-3 * std::max(r.width(), 1e-6);
        const double jitter_im = 1e-3 * std::max(r.height(), 1e-6);
        for (int attempt = 0;; ++attempt) {
            try {
                int e = 0;
                WindingCounter wc(D, probe);
                int n = wc.run(64, &e);
                evals += e;
                return n;
            } catch (const std::runtime_error&) {
                if (attempt >= 6) throw;
                probe.re_lo -= jitter_re;
                probe.re_hi += jitter_re;
                probe.im_lo -= jitter_im;
                probe.im_hi += jitter_im;
            }
        }
    };

    // Newton may wander to lambda where the shooting integration overflows;
    // any such excursion just means "no root found from this seed".
    const double leash = 4.0 * std::max({rect.width(), rect.height(), 1.0});
    auto newton = [&](Complex z0, const ComplexRect& r) -> std::optional<EigenRoot> {
      try {
        Complex z = z0;
        const double h = 1e-7 * std::max({r.width(), r.height(), 1.0});
        for (int it = 0; it < 60; ++it) {
            if (std::abs(z - z0) > leash) return std::nullopt;
            const Complex fz = D(z);
            evals += 1;
            if (std::abs(fz) <= tol) {
                if (report.search_region.contains(z)) return EigenRoot{z, std::abs(fz)};
                return std::nullopt;
            }
            const Complex d = (D(z + h) - D(z - h)) / (2.0 * h);
            evals += 2;
            if (d == Complex(0.0, 0.0)) return std::nullopt;
            const Complex step = fz / d;
            z -= step;
            ++report.newton_iterations;
            if (!finite(z)) return std::nullopt;
            if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) {
                const double res = std::abs(D(z));
                evals += 1;
                if (res <= tol && report.search_region.contains(z)) return EigenRoot{z, res};
                return std::nullopt;
            }
        }
        return std::nullopt;
      } catch (const std::overflow_error&) {
        return std::nullopt;
      }
    };

    std::vector<EigenRoot> roots;
    std::function<void(const ComplexRect&, int)> descend = [&](const ComplexRect& r, int depth) {
        if (!report.complete) return;
        int n;
        try {
            n = robust_count(r);
        } catch (const std::runtime_error&) {
            return;  // persistent boundary zero: treat as unresolvable sliver
        }
        if (n <= 0) return;
        if (static_cast<int>(roots.size()) + n > max_roots) {
            report.complete = false;
            return;
        }
        const double diam = std::max(r.width(), r.height());
        const double sep = 1e-6 * std::max({rect.width(), rect.height(), 1.0});
        if (n == 1 || diam < 1e-9) {
            Complex center{0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi)};
            if (auto root = newton(center, r)) {
                // accept only a root belonging to this box (with a little slack
                // for the boundary-jitter in robust_count); Newton converging
                // elsewhere means the box still needs subdividing
                ComplexRect slack{r.re_lo - sep, r.re_hi + sep, r.im_lo - sep, r.im_hi + sep};
                if (slack.contains(root->lambda)) {
                    for (const auto& existing : roots)
                        if (std::abs(existing.lambda - root->lambda) < sep) return;
                    roots.push_back(*root);
                    return;
                }
            }
            if (diam < 1e-9) {
                roots.push_back(EigenRoot{center, std::abs(D(center))});
                return;
            }
        }
        if (depth > 60) return;
        ComplexRect a = r, b = r;
        if (r.width() >= r.height()) {
            const double mid = 0.5 * (r.re_lo + r.re_hi);
            a.re_hi = mid;
            b.re_lo = mid;
        } else {
            const double mid = 0.5 * (r.im_lo + r.im_hi);
            a.im_hi = mid;
            b.im_lo = mid;
        }
        descend(a, depth + 1);
        descend(b, depth + 1);
    };
    descend(rect, 0);

    std::sort(roots.begin(), roots.end(), [](const EigenRoot& a, const EigenRoot& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    report.roots = std::move(roots);
    report.spectral_bound_estimate = -std::numeric_limits<double>::infinity();
    for (const auto& r : report.roots)
        report.spectral_bound_estimate = std::max(report.spectral_bound_estimate, r.lambda.real());
    report.determinant_evaluations = evals.load();
    return report;
}

std::vector<double> real_determinant_zeros(const LinearizedCoefficients& c, double lo, double hi,
                                           int scan) {
    std::vector<double> val(scan + 1);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k <= scan; ++k)
        val[k] = determinant(c, Complex(lo + (hi - lo) * k / scan, 0.0)).real();
    std::vector<double> zeros;
    for (int k = 0; k < scan; ++k) {
        double a = lo + (hi - lo) * k / scan;
        double b = lo + (hi - lo) * (k + 1) / scan;
        double fa = val[k], fb = val[k + 1];
        if (fa == 0.0) {
            zeros.push_back(a);
            continue;
        }
        if (fa * fb >= 0.0) continue;
        while (b - a > 1e-10) {
            const double mid = 0.5 * (a + b);
            const double fm = determinant(c, Complex(mid, 0.0)).real();
            if (fm == 0.0) {
                a = b = mid;
                break;
            }
            if (fa * fm < 0.0) b = mid;
            else a = mid, fa = fm;
        }
        zeros.push_back(0.5 * (a + b));
    }
    if (val[scan] == 0.0) zeros.push_back(hi);
    return zeros;
}

}  // namespace hierstab
