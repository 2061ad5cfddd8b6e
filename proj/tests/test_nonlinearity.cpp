#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lichlab/nonlinearity.hpp"

using namespace lichlab;

namespace {

CoefficientSet constants(double a, double b, double c, double s, double t) {
    return CoefficientSet(RadialField::constant(a), RadialField::constant(b),
                          RadialField::constant(c), s, t);
}

}  // namespace

TEST(FEval, Arithmetic) {
    EXPECT_NEAR(f_eval(constants(0, 1, 1, 3, -1), 0.5, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(f_eval(constants(1, 0, 0, 2, 0.5), 0.5, 5.0), 5.0, 1e-15);
    EXPECT_NEAR(f_eval(constants(2, 1, 3, 2, 0.5), 0.5, 4.0), -2.0, 1e-12);
}

TEST(FEval, SingularSourceGuard) {
    auto C = constants(0, 1, 1, 3, -1);
    EXPECT_THROW(f_eval(C, 0.5, 0.0), numerical_error);
    EXPECT_THROW(f_eval(C, 0.5, -1.0), numerical_error);
    // tau in [0,1): u = 0 is fine
    EXPECT_NO_THROW(f_eval(constants(0, 1, 1, 3, 0.5), 0.5, 0.0));
}

TEST(QuotientMonotone, AdmissibleCoefficientsAlwaysPass) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> Ua(-3, 3), Ubc(0, 3), Us(1.01, 4.0), Ut(-2.0, 0.99);
    std::vector<double> s_grid;
    for (double s = 0.05; s <= 20.0; s *= 1.17) s_grid.push_back(s);
    for (int k = 0; k < 200; ++k) {
        auto C = constants(Ua(rng), Ubc(rng), Ubc(rng), Us(rng), Ut(rng));
        EXPECT_TRUE(quotient_monotone_check(C, 0.5, s_grid));
    }
    // b = c = 0: the quotient is constant, still (weakly) nonincreasing
    EXPECT_TRUE(quotient_monotone_check(constants(2, 0, 0, 3, -1), 0.5, s_grid));
}

TEST(CoefficientSet, ExponentInvariantsEnforced) {
    EXPECT_THROW(constants(0, 1, 1, 0.5, -1), config_error);  // sigma <= 1 rejected upstream
    EXPECT_THROW(constants(0, 1, 1, 3, 1.0), config_error);   // tau >= 1 rejected upstream
    ModelManifold M(3, WarpingFunction::euclidean(), 4.0);
    CoefficientSet bad(RadialField::from_expression("r-1"), RadialField::from_expression("r-1"),
                       RadialField::constant(1), 3.0, -1.0);
    EXPECT_THROW(bad.validate_signs(4.0), config_error);
}

TEST(RatioBounds, PinchedAndShifted) {
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto rb = ratio_bounds(constants(0, 1, 1, 3, -1), M);
    EXPECT_DOUBLE_EQ(rb.H, 1.0);
    EXPECT_DOUBLE_EQ(rb.K, 1.0);
    EXPECT_DOUBLE_EQ(rb.script_H, 1.0);
    EXPECT_DOUBLE_EQ(rb.script_K, 1.0);
    auto rb2 = ratio_bounds(constants(3, 1, 1, 3, -1), M);
    EXPECT_DOUBLE_EQ(rb2.H, 4.0);
    EXPECT_DOUBLE_EQ(rb2.script_H, 2.0);
}

TEST(RatioBounds, GridSupAgainstDenseSampling) {
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    CoefficientSet C(RadialField::from_expression("-1/(1+pow(r,2))"), RadialField::constant(1),
                     RadialField::constant(2), 3.0, -1.0);
    auto rb = ratio_bounds(C, M);
    // oracle: dense sampling at 16x the default resolution
    double K_dense = 0;
    for (int i = 0; i <= 32000; ++i) {
        double r = 8.0 * i / 32000;
        K_dense = std::max(K_dense, (1.0 / (1 + r * r) + 1.0) / 2.0);
    }
    EXPECT_NEAR(rb.K, K_dense, 1e-9);
    EXPECT_DOUBLE_EQ(rb.K, 1.0);             // (a_-(0) + 1)/2 = 1
    EXPECT_DOUBLE_EQ(rb.script_K, 1.0);      // min{1, 1^{1/(tau-1)}}
}

TEST(RatioBounds, InfiniteWhenDenominatorVanishes) {
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto rb = ratio_bounds(constants(1, 0, 1, 3, -1), M);
    EXPECT_TRUE(std::isinf(rb.H));
    auto rb2 = ratio_bounds(constants(-1, 1, 0, 3, -1), M);
    EXPECT_TRUE(std::isinf(rb2.K));
    EXPECT_DOUBLE_EQ(rb2.script_K, 0.0);
}

TEST(ConstantBarriers, EqualityCaseHasZeroResidual) {
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto bp = constant_barriers(constants(0, 1, 1, 3, -1), M);
    EXPECT_TRUE(bp.sub.certified);
    EXPECT_TRUE(bp.sup.certified);
    EXPECT_NEAR(bp.sub.worst, 0.0, 1e-14);
    EXPECT_NEAR(bp.sup.worst, 0.0, 1e-14);
}

TEST(ConstantBarriers, SupersolutionArithmeticCase) {
    // a=3, b=1, c=1, sigma=3, tau=0: script H = 2, f(2) = 6 - 8 + 1 = -1
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto C = constants(3, 1, 1, 3, 0);
    auto bp = constant_barriers(C, M);
    EXPECT_DOUBLE_EQ(bp.sup.fn.v[0], 2.0);
    EXPECT_NEAR(f_eval(C, 0.5, 2.0), -1.0, 1e-14);
    EXPECT_TRUE(bp.sup.certified);
}

TEST(ConstantBarriers, RandomDrawPropertySweep) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> Ua(-2, 2), Ubc(0.25, 3.0), Us(1.2, 4.0), Ut(-2.0, 0.9);
    ModelManifold M(3, WarpingFunction::euclidean(), 4.0);
    for (int k = 0; k < 1000; ++k) {
        auto C = constants(Ua(rng), Ubc(rng), Ubc(rng), Us(rng), Ut(rng));
        auto bp = constant_barriers(C, M, 256);
        ASSERT_TRUE(bp.sub.certified);
        ASSERT_TRUE(bp.sup.certified);
        ASSERT_LE(bp.sub.fn.v[0], bp.sup.fn.v[0]);
    }
}

TEST(ConstantBarriers, InfiniteRatioDirectsToLemma1) {
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    try {
        constant_barriers(constants(1, 0, 1, 3, -1), M);
        FAIL() << "expected hypothesis_error";
    } catch (const hypothesis_error& e) {
        EXPECT_NE(std::string(e.what()).find("lemma1_supersolution"), std::string::npos);
    }
}

TEST(DominatingConstant, BisectionAgainstScalarOracle) {
    // alpha=1, beta=1, delta=1, sigma=3, tau=0: smallest U with
    // 1 - U^2 + 1/U <= 0 is the root of U^3 - U - 1 (plastic number)
    const double root = 1.3247179572447460;
    double lam0 = smallest_dominating_constant(1.0, 1.0, 1.0, 3.0, 0.0);
    EXPECT_NEAR(lam0, 1.05 * root, 1e-8);  // 5% inflation by design
}

TEST(Lemma1Supersolution, ConstantBranchWhenZeroSetEmpty) {
    ModelManifold M(3, WarpingFunction::euclidean(), 4.0);
    auto C = constants(1, 1, 1, 3, 0);
    auto res = lemma1_supersolution(C, M, C.a, 2.0, 0.0, 0.0, 512);
    EXPECT_TRUE(res.v.certified);
    EXPECT_DOUBLE_EQ(res.gamma, 1.0);
    for (double v : res.v.fn.v) EXPECT_DOUBLE_EQ(v, res.lambda0);
}

TEST(Lemma1Supersolution, FullPipelineWithVanishingB) {
    // b = 0 on r < 1/4, quintic ramp to 1 on [1/4, 1/2]
    const int n = 2000;
    std::vector<double> r(n + 1), b(n + 1);
    for (int i = 0; i <= n; ++i) {
        r[i] = 2.0 * i / n;
        if (r[i] <= 0.25) b[i] = 0.0;
        else if (r[i] >= 0.5) b[i] = 1.0;
        else {
            double s = (r[i] - 0.25) / 0.25;
            b[i] = 10 * s * s * s - 15 * s * s * s * s + 6 * s * s * s * s * s;
        }
    }
    CoefficientSet C(RadialField::constant(0.0), RadialField::from_samples(r, b),
                     RadialField::constant(1.0), 3.0, -1.0);
    ModelManifold M(3, WarpingFunction::euclidean(), 2.0);
    auto res = lemma1_supersolution(C, M, C.a, 2.0, 0.4, 0.7, n);
    EXPECT_TRUE(res.v.certified);          // nonpositive discrete residual everywhere
    EXPECT_GT(res.v.fn.min_value(), 0.0);  // positive on the closed ball
}

TEST(Lemma1Supersolution, HypothesisGates) {
    ModelManifold M(3, WarpingFunction::euclidean(), 2.0);
    // b identically zero: beta = 0 on the shell
    auto Cz = constants(0, 0, 1, 3, -1);
    EXPECT_THROW(lemma1_supersolution(Cz, M, Cz.a, 2.0, 0.0, 0.0, 256), hypothesis_error);
    // lambda_1(Delta + a_bar)(D) <= 0: huge positive a_bar on D
    auto C = constants(0, 1, 1, 3, -1);
    RadialField abar = RadialField::constant(500.0);
    EXPECT_THROW(lemma1_supersolution(C, M, abar, 2.0, 0.4, 0.7, 256), hypothesis_error);
}

TEST(SigmaProperty, RouteOneSpectralNegativity) {
    // a = 1 constant, b small: a - b + Lambda c goes spectrally negative
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto C = constants(1.0, 0.05, 1.0, 3.0, -1.0);
    auto sig = sigma_property(C, M, 2.0, std::nullopt, 512);
    EXPECT_TRUE(sig.holds);
    EXPECT_EQ(sig.route, 1);
    EXPECT_TRUE(sig.witness.certified);
    EXPECT_GT(sig.witness.fn.min_value(), 0.0);
}

TEST(SigmaProperty, RouteTwoInversionTrick) {
    // c tiny positive: the Lambda grid cannot push the spectrum negative
    // (route i fails), but C_0 is empty so the mirrored construction and
    // phi = 1/psi go through
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto C = constants(0.0, 1.0, 1e-9, 3.0, -1.0);
    auto sig = sigma_property(C, M, 2.0, std::nullopt, 512);
    EXPECT_TRUE(sig.holds);
    EXPECT_EQ(sig.route, 2);
    EXPECT_TRUE(sig.witness.certified);
}

TEST(SigmaProperty, RouteThreeUserWitness) {
    // f identically zero: the constant 1 is a (sub)solution
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto C = constants(0, 0, 0, 3, 0.5);
    RadialGrid g(0.0, 2.0, 64);
    auto sig = sigma_property(C, M, 2.0, constant_function(g, 1.0), 512);
    EXPECT_TRUE(sig.holds);
    EXPECT_EQ(sig.route, 3);
    EXPECT_NEAR(sig.witness.worst, 0.0, 1e-14);
}

TEST(SigmaProperty, AllRoutesFailGivesDiagnostics) {
    // f(u) = -u^3: every positive constant is a strict supersolution and
    // the only nonnegative subsolution is 0
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto C = constants(0, 1, 0, 3, 0.5);
    RadialGrid g(0.0, 2.0, 64);
    auto sig = sigma_property(C, M, 2.0, constant_function(g, 1.0), 512);
    EXPECT_FALSE(sig.holds);
    EXPECT_FALSE(sig.diagnostics.empty());
}

TEST(TheoremBPasting, MuStarFormula) {
    // c >= 1 everywhere, a >= 0, b <= 1: ratio_sup <= 1 so the formula
    // reduces to min{1, ratio^{1/(tau-1)}, nu/2} with the last term binding
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    CoefficientSet C(RadialField::from_expression("12*exp(-2*pow(r-1.5,2))"),
                     RadialField::from_expression("exp(-pow(0.2/r,12))"),
                     RadialField::constant(1.0), 3.0, -1.0);
    auto res = theoremB_pasted_subsolution(C, M, 2.0, 3.0, 1000);
    EXPECT_TRUE(res.hypotheses.all());
    EXPECT_TRUE(res.u_minus.certified);
    double expected = std::min({1.0, std::pow(res.hypotheses.ratio_sup, -0.5), 0.5 * res.nu});
    EXPECT_DOUBLE_EQ(res.mu_star, expected);
    EXPECT_LE(res.mu_star, 0.5 * res.nu);  // pasted function continuous positive
    EXPECT_GT(res.u_minus.fn.min_value(), 0.0);
    EXPECT_FALSE(res.interface_nodes.empty());
}

TEST(TheoremBPasting, ContainmentPrecondition) {
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    CoefficientSet C(RadialField::constant(0), RadialField::from_expression("exp(-pow(0.2/r,12))"),
                     RadialField::constant(1.0), 3.0, -1.0);
    EXPECT_THROW(theoremB_pasted_subsolution(C, M, 3.0, 3.0, 512), config_error);
}

TEST(TheoremBPasting, StructuredHypothesisFailure) {
    // c vanishing outside Omega_1 makes the ratio sup infinite (hp2 fails)
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    CoefficientSet C(RadialField::constant(0), RadialField::from_expression("exp(-pow(0.2/r,12))"),
                     RadialField::from_expression("exp(-2*pow(r,2))"), 3.0, -1.0);
    try {
        theoremB_pasted_subsolution(C, M, 2.0, 3.0, 512);
        FAIL() << "expected hypothesis_error";
    } catch (const hypothesis_error& e) {
        EXPECT_NE(std::string(e.what()).find("sup"), std::string::npos);
    }
}

TEST(PinchedInvariant, ExactConstantSolution) {
    // H = K = 1 forces script H = script K = 1 and u = 1 solves exactly
    ModelManifold M(3, WarpingFunction::euclidean(), 8.0);
    auto C = constants(0, 1, 1, 3, -1);
    RadialGrid grid(0.0, 2.0, 512);
    RadialOperator op(M, grid, true);
    auto one = certify(M, C, op, std::vector<double>(grid.size(), 1.0), BarrierRole::subsolution);
    EXPECT_NEAR(one.worst, 0.0, 1e-15);
}
