#include "fvv/kernel_checks.hpp"

#include "fvv/fourier_core.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>

namespace fvv {
namespace {

// Exact for trigonometric polynomials of degree below `points`.
double periodic_trapezoid(const std::function<double(double)>& f, int points) {
    double s = 0.0;
    for (int i = 0; i < points; ++i) s += f(-kPi + kTwoPi * i / points);
    return s * kTwoPi / points;
}

double composite_gauss(const std::function<double(double)>& f, double a, double b, int pieces) {
    double s = 0.0;
    const double h = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i)
        s += boost::math::quadrature::gauss<double, 15>::integrate(f, a + i * h, a + (i + 1) * h);
    return s;
}

KernelCheck make(std::string name, int order, double computed, double expected, double tol) {
    KernelCheck c;
    c.name = std::move(name);
    c.order = order;
    c.computed = computed;
    c.expected = expected;
    c.error = expected != 0.0 ? std::abs(computed - expected) / std::abs(expected)
                              : std::abs(computed);
    c.tolerance = tol;
    c.pass = c.error <= tol;
    return c;
}

double poly_d1(double m) { return m * m * m + 4 * m * m + 6 * m + 4; }
double poly_d2(double m) {
    return 2 * std::pow(m, 5) + 12 * std::pow(m, 4) + 30 * m * m * m + 40 * m * m + 23 * m - 2;
}

}  // namespace

double fejer_sq_integral(int M) {
    const double m = M;
    return kTwoPi * (2 * m * m + 4 * m + 3) / (3 * (m + 1));
}

double fejer_d1_sq_integral(int M) {
    const double m = M;
    return kTwoPi * m * poly_d1(m) / (15 * (m + 1));
}

double fejer_d2_sq_integral(int M) {
    const double m = M;
    return kTwoPi * m * poly_d2(m) / (105 * (m + 1));
}

double good_kernel_d1(int M, double x) {
    const double d = fejer(M, x, 1);
    return kTwoPi * d * d / fejer_d1_sq_integral(M);
}

double good_kernel_d2(int M, double x) {
    const double d = fejer(M, x, 2);
    return kTwoPi * d * d / fejer_d2_sq_integral(M);
}

std::vector<KernelCheck> run_kernel_checks(const KernelCheckOptions& opt) {
    std::vector<KernelCheck> out;
    std::vector<double> tail1, tail2;
    for (int M : opt.orders) {
        const int P = 16 * (M + 1);
        const double m = M;
        out.push_back(make("fejer_mean", M,
                           periodic_trapezoid([&](double x) { return fejer(M, x); }, P) / kTwoPi,
                           1.0, opt.integral_tol));
        out.push_back(make("fejer_sq", M,
                           periodic_trapezoid([&](double x) { return std::pow(fejer(M, x), 2); }, P) / m,
                           fejer_sq_integral(M) / m, opt.integral_tol));
        out.push_back(make("fejer_d1_sq", M,
                           periodic_trapezoid([&](double x) { return std::pow(fejer(M, x, 1), 2); }, P) /
                               std::pow(m, 3),
                           kTwoPi * poly_d1(m) / (15 * m * m * (m + 1)), opt.derivative_tol));
        out.push_back(make("fejer_d2_sq", M,
                           periodic_trapezoid([&](double x) { return std::pow(fejer(M, x, 2), 2); }, P) /
                               std::pow(m, 5),
                           kTwoPi * poly_d2(m) / (105 * std::pow(m, 4) * (m + 1)),
                           opt.derivative_tol));
        out.push_back(make("good_kernel_d1_mass", M,
                           periodic_trapezoid([&](double x) { return good_kernel_d1(M, x); }, P) / kTwoPi,
                           1.0, opt.derivative_tol));
        out.push_back(make("good_kernel_d2_mass", M,
                           periodic_trapezoid([&](double x) { return good_kernel_d2(M, x); }, P) / kTwoPi,
                           1.0, opt.derivative_tol));

        const int pieces = 4 * (M + 1);
        tail1.push_back(2 * composite_gauss([&](double x) { return good_kernel_d1(M, x); },
                                            opt.tail_delta, kPi, pieces));
        tail2.push_back(2 * composite_gauss([&](double x) { return good_kernel_d2(M, x); },
                                            opt.tail_delta, kPi, pieces));

        // Dirichlet with N = M: Parseval mass, peak value and global bound.
        const int N = M;
        out.push_back(make("dirichlet_sq", N,
                           periodic_trapezoid([&](double x) { return std::pow(dirichlet(N, x), 2); }, P),
                           kTwoPi / (2 * N + 1), opt.integral_tol));
        out.push_back(make("dirichlet_peak", N, dirichlet(N, 0.0), 1.0, opt.integral_tol));
        double peak = 0.0;
        for (int i = 1; i < P; ++i) peak = std::max(peak, std::abs(dirichlet(N, -kPi + kTwoPi * i / P)));
        KernelCheck bound = make("dirichlet_bound", N, peak, 1.0, 0.0);
        bound.error = std::max(0.0, peak - 1.0);
        bound.pass = peak <= 1.0 + 1e-12;
        out.push_back(bound);
    }
    // Tail mass away from the origin must shrink as M grows.
    for (std::size_t i = 0; i < opt.orders.size(); ++i) {
        const bool shrinking1 = i == 0 || tail1[i] < tail1[i - 1];
        const bool shrinking2 = i == 0 || tail2[i] < tail2[i - 1];
        KernelCheck a = make("good_kernel_d1_tail", opt.orders[i], tail1[i], 0.0, 0.0);
        a.pass = shrinking1;
        KernelCheck b = make("good_kernel_d2_tail", opt.orders[i], tail2[i], 0.0, 0.0);
        b.pass = shrinking2;
        out.push_back(a);
        out.push_back(b);
    }
    return out;
}

}  // namespace fvv
