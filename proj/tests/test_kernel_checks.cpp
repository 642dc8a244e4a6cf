#include "fvv/kernel_checks.hpp"
#include "fvv/types.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fvv;

namespace {

// 2pi sum_{|k|<=M} w_k^2 k^{2p}, the Parseval side of each identity.
double parseval(int M, int p) {
    double s = 0.0;
    for (int k = -M; k <= M; ++k) {
        const double w = 1.0 - std::abs(k) / (M + 1.0);
        s += w * w * std::pow(static_cast<double>(k), 2 * p);
    }
    return kTwoPi * s;
}

}  // namespace

TEST(KernelChecks, ClosedFormsEqualParsevalSums) {
    for (int M : {1, 2, 3, 8, 50, 128}) {
        EXPECT_NEAR(fejer_sq_integral(M), parseval(M, 0), 1e-12 * parseval(M, 0)) << M;
        EXPECT_NEAR(fejer_d1_sq_integral(M), parseval(M, 1), 1e-12 * parseval(M, 1)) << M;
        EXPECT_NEAR(fejer_d2_sq_integral(M), parseval(M, 2), 1e-12 * parseval(M, 2)) << M;
    }
}

TEST(KernelChecks, NormalizedLimits) {
    const double M = 4096;
    EXPECT_NEAR(fejer_d1_sq_integral(4096) / (M * M * M), kTwoPi / 15.0, 1e-3);
    EXPECT_NEAR(fejer_d2_sq_integral(4096) / std::pow(M, 5), 4.0 * kPi / 105.0, 1e-3);
}

TEST(KernelChecks, DefaultSuitePasses) {
    const auto checks = run_kernel_checks();
    EXPECT_FALSE(checks.empty());
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.name << " M=" << c.order << " err=" << c.error;
}

TEST(KernelChecks, OrderOneIncluded) {
    KernelCheckOptions opt;
    opt.orders = {1};
    for (const auto& c : run_kernel_checks(opt)) EXPECT_TRUE(c.pass) << c.name;
}

TEST(KernelChecks, TamperedToleranceFails) {
    KernelCheckOptions opt;
    opt.integral_tol = opt.derivative_tol = 1e-16;
    int failures = 0;
    for (const auto& c : run_kernel_checks(opt)) failures += !c.pass;
    EXPECT_GT(failures, 0);
}

TEST(KernelChecks, TailMassShrinksWithOrder) {
    KernelCheckOptions opt;
    opt.orders = {8, 16, 32, 64};
    for (const auto& c : run_kernel_checks(opt))
        if (c.name.find("tail") != std::string::npos) {
            EXPECT_TRUE(c.pass) << c.name << c.order;
        }
}

TEST(KernelChecks, GoodKernelsAreNormalized) {
    for (int M : {8, 33}) {
        const int P = 64 * (M + 1);
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < P; ++i) {
            const double x = -kPi + kTwoPi * i / P;
            s1 += good_kernel_d1(M, x);
            s2 += good_kernel_d2(M, x);
        }
        EXPECT_NEAR(s1 / P, 1.0, 1e-12);
        EXPECT_NEAR(s2 / P, 1.0, 1e-12);
    }
}
