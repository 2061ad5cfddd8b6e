#include <gtest/gtest.h>

#include <cmath>

#include "lichlab/asymptotic.hpp"

using namespace lichlab;

namespace {
const double kE = std::exp(1.0);
}

TEST(IntegrateBeta, EulerClosedForm) {
    // w = sqrt(t) log t solves w'' + w/(4t^2) = 0
    double w0 = std::sqrt(kE) * 1.0;
    double dw0 = 1.0 / (2 * std::sqrt(kE)) + 1.0 / std::sqrt(kE);
    auto rep = integrate_beta(BetaKind::euler_reference, kE, std::exp(6.0), w0, dw0);
    double worst = 0;
    for (std::size_t i = 0; i < rep.trace_t.size(); ++i) {
        double t = rep.trace_t[i];
        double exact = std::sqrt(t) * std::log(t);
        worst = std::max(worst, std::fabs(rep.trace_beta[i] - exact) / exact);
    }
    EXPECT_LT(worst, 1e-6);
    EXPECT_EQ(rep.zero_count, 0);
}

TEST(IntegrateBeta, KappaThresholdNonOscillatory) {
    auto rep = integrate_beta(BetaKind::kappa_threshold, kE * kE, 1e6);
    EXPECT_EQ(rep.zero_count, 0);
    EXPECT_GE(rep.constraint_be_bed, -1e-10);
}

TEST(IntegrateBeta, ConstantLambdaOneIsLinear) {
    // lambda = 1: beta'' = 0; with beta(T) = T, dbeta(T) = 1 the solution is
    // beta(t) = t and beta - dbeta = t - 1 >= 0
    double T = kE * kE;
    auto rep = integrate_beta(BetaKind::constant_lambda, T, 1e4, T, 1.0, 1.0);
    for (std::size_t i = 0; i < rep.trace_t.size(); ++i)
        ASSERT_NEAR(rep.trace_beta[i] / rep.trace_t[i], 1.0, 1e-10);
    EXPECT_GE(rep.constraint_be_bed, T - 1.0 - 1e-8);
    EXPECT_EQ(rep.zero_count, 0);
}

TEST(IntegrateBeta, SuperEulerControlOscillates) {
    auto rep = integrate_beta(BetaKind::super_euler_control, kE * kE, 1e6);
    EXPECT_GE(rep.zero_count, 1);
}

TEST(IntegrateBeta, SturmTwoSidedSanity) {
    // potential below Euler (kappa - 1 at large t behaves like Euler's
    // threshold): no zeros; above it (epsilon = 0.5): zeros appear
    auto non = integrate_beta(BetaKind::kappa_threshold, kE * kE, 1e6);
    auto osc = integrate_beta(BetaKind::super_euler_control, kE * kE, 1e6, 1.0, 1.0, 1.0, 0.5);
    EXPECT_EQ(non.zero_count, 0);
    EXPECT_GE(osc.zero_count, 1);
}

TEST(IntegrateBeta, WronskianConstancy) {
    // two solutions integrated as one 4-dimensional system; their Wronskian
    // is a first integral of the linear equation
    OdeDP45 ode(
        [](double t, const std::vector<double>& y, std::vector<double>& dy) {
            double q = KappaPotential::kappa_minus_one(t);
            dy[0] = y[1];
            dy[1] = -q * y[0];
            dy[2] = y[3];
            dy[3] = -q * y[2];
        },
        1e-11, 1e-13);
    double W0 = 1.0 * 0.0 - 1.0 * 1.0;  // y = (1,1), z = (1,0)
    double worst = 0;
    ode.integrate(kE * kE, {1.0, 1.0, 1.0, 0.0}, 1e5, [&](const OdeDP45::Step& s) {
        double W = s.y1[0] * s.y1[3] - s.y1[2] * s.y1[1];
        worst = std::max(worst, std::fabs(W - W0) / std::fabs(W0));
    });
    EXPECT_LT(worst, 1e-8);
}

TEST(RhoSubstitution, SanityZeroPotential) {
    auto rep = rho_substitution_check(3, 300.0, 30000.0, true);
    EXPECT_TRUE(rep.z_prime_nonpositive);
    EXPECT_NEAR(rep.consistency_rel_error, 0.0, 1e-12);  // z stays at 1
}

TEST(RhoSubstitution, KappaFormsAgree) {
    auto rep = rho_substitution_check(3, 300.0, 30000.0, false);
    EXPECT_TRUE(rep.z_prime_nonpositive);
    EXPECT_LE(rep.max_z_prime, 1e-10);
    EXPECT_LT(rep.consistency_rel_error, 1e-8);
    // n = 4 exercises the general exponent mapping
    auto rep4 = rho_substitution_check(4, 60.0, 6000.0, false);
    EXPECT_TRUE(rep4.z_prime_nonpositive);
    EXPECT_LT(rep4.consistency_rel_error, 1e-8);
}

TEST(HilleNehari, StrictEnclosure) {
    auto samples = hille_nehari_probe(std::exp(1.1), std::exp(10.0), 100);
    ASSERT_EQ(samples.size(), 100u);
    for (const auto& s : samples) {
        ASSERT_GT(s.value, 0.25);
        ASSERT_LT(s.value, s.upper);
    }
    // t = e^2 lands in (1/4, 1/4 + 1/8)
    auto at_e2 = hille_nehari_probe(kE * kE, kE * kE * 1.0001, 1).front();
    EXPECT_GT(at_e2.value, 0.25);
    EXPECT_LT(at_e2.value, 0.25 + 0.125);
    // correction vanishes for large t
    auto large = hille_nehari_probe(std::exp(25.0), std::exp(25.1), 1).front();
    EXPECT_LT(large.value - 0.25, 0.25 / 25.0);
    // pure Euler value is exactly 1/4
    EXPECT_DOUBLE_EQ(hille_nehari_euler_value(), 0.25);
}

TEST(CriticalCurve, IdentityToRoundoff) {
    auto rep = critical_curve_identity();
    EXPECT_TRUE(rep.exact_to_roundoff);
    EXPECT_LE(rep.max_rel_diff, 1e-14);
    // endpoint values: both sides are 1/(4 e^2) at t = e, 1/(16 e^4) at e^2
    double lhs_e = KappaPotential::kappa_minus_one(kE) - 0.25 / (kE * kE);
    EXPECT_NEAR(lhs_e, 0.25 / (kE * kE), 1e-16);
    EXPECT_NEAR(KappaPotential::chi_w2(kE), 0.25 / (kE * kE), 1e-16);
    EXPECT_NEAR(KappaPotential::chi_w2(kE * kE), 1.0 / (16.0 * std::pow(kE, 4.0)), 1e-18);
}

TEST(FiniteIndexBarrier, EuclideanLambdaModes) {
    ModelManifold M(3, WarpingFunction::euclidean(), 6.0e6);
    auto G = green_kernel(M);
    auto env1 = finite_index_barrier(M, G, BarrierMode::constant_lambda, 1.0, kE * kE);
    double worst = 0;
    for (std::size_t i = 0; i < env1.u.r.size(); ++i) {
        double Gv = G.G(env1.u.r[i]);
        double closed = 0.5 * std::sqrt(Gv) * std::log(1.0 / Gv);
        worst = std::max(worst, std::fabs(env1.u.v[i] - closed) / closed);
    }
    EXPECT_LT(worst, 1e-8);
    EXPECT_TRUE(env1.certified);
    auto env0 = finite_index_barrier(M, G, BarrierMode::constant_lambda, 0.0, kE * kE);
    for (double v : env0.u.v) ASSERT_NEAR(v, env0.u.v[0], 1e-8);
    EXPECT_TRUE(env0.certified);
    // lambda < 0 keeps the exponent formula (1 - sqrt(1 - lambda))/2
    auto envm = finite_index_barrier(M, G, BarrierMode::constant_lambda, -3.0, kE * kE);
    double expo = (1.0 - std::sqrt(4.0)) / 2.0;  // -1/2
    double r1 = envm.u.r[10], r2 = envm.u.r[200];
    double measured = std::log(envm.u.v[200] / envm.u.v[10]) /
                      std::log(G.G(r2) / G.G(r1));
    EXPECT_NEAR(measured, expo, 1e-6);
}

TEST(FiniteIndexBarrier, KappaModeCertifiedOnBothModels) {
    ModelManifold Mh(3, WarpingFunction::hyperbolic(1.0), 30.0);
    auto Gh = green_kernel(Mh);
    auto envh = finite_index_barrier(Mh, Gh, BarrierMode::kappa_threshold, 1.0, kE * kE);
    EXPECT_TRUE(envh.certified);
    EXPECT_LE(envh.worst_residual, tol::barrier_envelope);
    ModelManifold Me(3, WarpingFunction::euclidean(), 6.0e6);
    auto Ge = green_kernel(Me);
    auto enve = finite_index_barrier(Me, Ge, BarrierMode::kappa_threshold, 1.0, kE * kE);
    EXPECT_TRUE(enve.certified);
    // the kappa-mode envelope tracks phi on the window
    ASSERT_FALSE(envh.phi.empty());
}

TEST(FiniteIndexBarrier, WindowTooShortErrors) {
    ModelManifold M(3, WarpingFunction::euclidean(), 100.0);  // t_max ~ 2.3 < e^2
    auto G = green_kernel(M);
    EXPECT_THROW(finite_index_barrier(M, G, BarrierMode::kappa_threshold, 1.0, kE * kE),
                 config_error);
}

TEST(FiniteIndexBarrier, ParabolicModelRejected) {
    ModelManifold M(2, WarpingFunction::euclidean(), 10.0);
    auto G = green_kernel(M);
    EXPECT_THROW(finite_index_barrier(M, G, BarrierMode::constant_lambda, 0.0, 1.0),
                 hypothesis_error);
}

TEST(PhiEnvelope, ExactExponentialForm) {
    // G = e^{-2r}: t = r, phi = e^{-r} sqrt(r log r) log log r
    RadialGrid grid(3.0, 30.0, 500);
    std::vector<double> G(grid.size());
    for (int i = 0; i < grid.size(); ++i) G[i] = std::exp(-2.0 * grid.node(i));
    auto phi = phi_envelope(RadialFunction(grid.nodes(), G));
    for (std::size_t i = 0; i < phi.r.size(); ++i) {
        double t = phi.r[i];
        double exact = std::exp(-t) * std::sqrt(t * std::log(t)) * std::log(std::log(t));
        ASSERT_NEAR(phi.v[i] / exact, 1.0, 1e-13);
    }
}

TEST(PhiEnvelope, HyperbolicDecayAndGuard) {
    ModelManifold M(3, WarpingFunction::hyperbolic(1.0), 30.0);
    auto G = green_kernel(M);
    auto phi = phi_envelope(G.G);
    // monotone decay on the asymptotic window
    std::size_t start = phi.v.size() / 4;
    for (std::size_t i = start + 1; i < phi.v.size(); ++i) ASSERT_LT(phi.v[i], phi.v[i - 1]);
    // window too small: t never exceeds e
    RadialGrid grid(0.1, 2.0, 100);
    std::vector<double> small(grid.size());
    for (int i = 0; i < grid.size(); ++i) small[i] = std::exp(-2.0 * grid.node(i));
    EXPECT_THROW(phi_envelope(RadialFunction(grid.nodes(), small)), config_error);
}

TEST(OscillationReport, RatioDriftOverLastDecade) {
    auto rep = integrate_beta(BetaKind::kappa_threshold, kE * kE, 1e8);
    EXPECT_GE(rep.ratio_values.size(), 10u);
    EXPECT_LT(rep.ratio_drift, 0.05);
}
