#pragma once

#include <string>
#include <vector>

namespace fvv {

struct KernelCheck {
    std::string name;
    int order = 0;  // M for Fejer checks, N for Dirichlet checks
    double computed = 0.0;
    double expected = 0.0;
    double error = 0.0;  // relative unless the expected value is 0
    double tolerance = 0.0;
    bool pass = false;
};

struct KernelCheckOptions {
    std::vector<int> orders{8, 16, 32, 64, 128};
    double integral_tol = 1e-8;
    double derivative_tol = 1e-6;
    double tail_delta = 0.5;
};

/// Closed-form Fejer and Dirichlet identities against numerical quadrature.
std::vector<KernelCheck> run_kernel_checks(const KernelCheckOptions& opt = {});

/// Closed forms used by the checks.
double fejer_sq_integral(int M);         // int F_M^2
double fejer_d1_sq_integral(int M);      // int |F_M'|^2
double fejer_d2_sq_integral(int M);      // int |F_M''|^2

/// Normalized kernels built from |F_M'|^2 and |F_M''|^2, unit mean on [-pi, pi].
double good_kernel_d1(int M, double x);
double good_kernel_d2(int M, double x);

}  // namespace fvv
