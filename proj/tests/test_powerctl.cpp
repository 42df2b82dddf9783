#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cure/powerctl.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cure;

namespace {

SystemParams toy_system() {
    SystemParams sys;
    sys.rho_d = 1.0;
    sys.sigma2 = 1e-4;
    return sys;
}

// Two users with mirrored statistics on U APs; SE is O(1).
StatTerms mirrored_terms(int aps) {
    StatTerms st = make_stat_terms(aps, 2);
    Eigen::MatrixXd own = Eigen::MatrixXd::Constant(aps, aps, 0.5e-3);
    own.diagonal().setConstant(1e-3);
    const Eigen::MatrixXd cross = Eigen::MatrixXd::Constant(aps, aps, 0.05e-3);
    st.block(0, 0) = own.cast<cdouble>();
    st.block(1, 1) = own.cast<cdouble>();
    st.block(0, 1) = cross.cast<cdouble>();
    st.block(1, 0) = cross.cast<cdouble>();
    st.desired_mean.setConstant(std::sqrt(0.8e-3));
    st.uplink_second << 1.2, 0.1, 0.1, 1.2;
    st.uplink_mean.setConstant(1.0);
    st.combiner_power.setConstant(1.0);
    return st;
}

// J = 2, U = 1 with unequal users so the optimum is interior.
StatTerms lopsided_terms() {
    StatTerms st = make_stat_terms(1, 2);
    st.block(0, 0)(0, 0) = 1e-3;
    st.block(1, 1)(0, 0) = 0.3e-3;
    st.block(0, 1)(0, 0) = 0.05e-3;
    st.block(1, 0)(0, 0) = 0.02e-3;
    st.desired_mean << std::sqrt(0.9e-3), std::sqrt(0.25e-3);
    st.uplink_second << 1.3, 0.2, 0.05, 0.5;
    st.uplink_mean << 1.0, 0.6;
    st.combiner_power << 1.0, 0.7;
    return st;
}

MMFProblem toy_problem(StatTerms st, TransmissionMode mode = TransmissionMode::Coherent) {
    return make_problem(std::move(st), toy_system(), RectifierParams{}, mode, HarvesterModel::NonLinear);
}

}  // namespace

TEST_CASE("uplink power and SE scalars") {
    CHECK(uplink_power_from_energy(17.0, 170) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(uplink_power_from_energy(0.0, 170) == 0.0);
    SystemParams sys;
    CHECK(spectral_efficiency(0.0, sys) == 0.0);
    CHECK(spectral_efficiency(1.0, sys) == doctest::Approx(0.85).epsilon(1e-15));
}

TEST_CASE("single-user SINR reduces to p |h|^2 / sigma2") {
    const double h2 = 2.5e-6;
    StatTerms st = make_stat_terms(1, 1);
    st.uplink_mean(0) = h2;
    st.uplink_second(0, 0) = h2 * h2;
    st.combiner_power(0) = h2;
    SystemParams sys;
    Eigen::VectorXd p(1);
    p << 0.03;
    CHECK(uplink_sinr(p, st, sys)(0) == doctest::Approx(0.03 * h2 / sys.sigma2).epsilon(1e-12));
    CHECK(uplink_sinr(Eigen::VectorXd::Zero(1), st, sys)(0) == 0.0);

    SystemParams silent = sys;
    silent.sigma2 = 0;
    CHECK_THROWS_AS(uplink_sinr(Eigen::VectorXd::Zero(1), st, silent), NumericalError);

    const StatTerms sym = mirrored_terms(2);
    const Eigen::VectorXd s = uplink_sinr(Eigen::VectorXd::Constant(2, 0.01), sym, toy_system());
    CHECK(s(0) == s(1));
    CHECK(uplink_sinr(Eigen::VectorXd::Zero(2), sym, toy_system()).isZero(0));
}

TEST_CASE("feasibility flag") {
    const std::vector<double> ok{1.0, 2.0};
    const std::vector<double> low{0.5, 2.0};
    CHECK(feasibility(ok, 1.0));
    CHECK_FALSE(feasibility(low, 1.0));
    CHECK(feasibility(std::vector<double>{1.0 - 5e-10}, 1.0));
    CHECK_THROWS_AS(feasibility(std::vector<double>{}, 1.0), ValidationError);
}

TEST_CASE("equal-power baseline") {
    const MMFProblem prob = toy_problem(mirrored_terms(3));
    const MMFSolution b = equal_power_baseline(prob);
    CHECK((b.p.colwise().sum().array() == prob.sys.rho_d).all());
    CHECK(b.per_user_se(0) == b.per_user_se(1));
    CHECK(b.feasible);

    StatTerms one = make_stat_terms(2, 1);
    one.block(0, 0) = Eigen::MatrixXcd::Identity(2, 2) * 1e-3;
    one.desired_mean.setConstant(0.03);
    one.uplink_second(0, 0) = 1.1;
    one.uplink_mean(0) = 1.0;
    one.combiner_power(0) = 1.0;
    const MMFSolution s = equal_power_baseline(toy_problem(one));
    CHECK((s.p.array() == 1.0).all());
}

TEST_CASE("evaluate agrees with the module formulas") {
    const ScenarioSpec spec = test::small_spec(4, 3, 2);
    const MMFProblem prob = test::make_small_problem(spec, 14);
    const PowerCoefficients p = PowerCoefficients::Constant(3, 4, 0.1);
    const Evaluation ev = evaluate(prob, p);
    const Eigen::VectorXd I = input_power(p, prob.st, prob.mode);
    CHECK((ev.input_power - I).norm() <= 1e-12 * I.norm());
    Eigen::VectorXd P(3);
    for (int j = 0; j < 3; ++j)
        P(j) = uplink_power_from_energy(harvested_energy(I(j), prob.rect[j], prob.sys.delta_d, prob.eh_model),
                                        prob.sys.delta_u);
    const Eigen::VectorXd sinr = uplink_sinr(P, prob.st, prob.sys);
    for (int j = 0; j < 3; ++j)
        CHECK(ev.se(j) == doctest::Approx(spectral_efficiency(sinr(j), prob.sys)).epsilon(1e-10));
}

TEST_CASE("symmetric users end with equal SE") {
    for (auto mode : {TransmissionMode::Coherent, TransmissionMode::NonCoherent}) {
        const MMFSolution sol = mmf_solve(toy_problem(mirrored_terms(3), mode));
        REQUIRE(sol.per_user_se(0) > 0.1);
        CHECK(std::abs(sol.per_user_se(0) - sol.per_user_se(1)) <= 1e-6);
        CHECK(sol.min_se >= equal_power_baseline(toy_problem(mirrored_terms(3), mode)).min_se);
    }
}

TEST_CASE("two users on one AP match the exhaustive grid") {
    for (auto mode : {TransmissionMode::Coherent, TransmissionMode::NonCoherent}) {
        const MMFProblem prob = toy_problem(lopsided_terms(), mode);
        const test::GridOptimum grid = test::grid_mmf_two_users(prob, 200);
        const MMFSolution sol = mmf_solve(prob);
        CHECK(sol.min_se >= grid.min_se - grid.resolution);
        CHECK(sol.min_se <= grid.min_se + grid.resolution);
    }
}

TEST_CASE("solver on physical instances") {
    for (long long seed = 1; seed <= 6; ++seed) {
        const ScenarioSpec spec = test::small_spec(4, 1 + static_cast<int>(seed % 4), 2);
        const test::Pipeline pl = test::make_pipeline(spec, seed);
        for (auto mode : {TransmissionMode::Coherent, TransmissionMode::NonCoherent}) {
            MMFProblem prob = make_problem(pl.st, spec.system, spec.rectifier, mode, spec.eh_model);
            const MMFSolution base = equal_power_baseline(prob);
            const MMFSolution sol = mmf_solve(prob);
            CHECK(sol.feasible);
            CHECK(sol.min_se >= base.min_se);
            CHECK(sol.min_se <= se_upper_bound(prob) * (1 + 1e-9));
            CHECK((sol.p.array() >= 0).all());
            CHECK(check_power_constraint(ap_transmit_power(sol.p, pl.w), spec.system.rho_d).all());

            // a target the solution reaches stays reachable from it
            for (double f : {0.1, 0.5, 0.9, 1.0}) {
                const AscentResult r = feasibility_ascent(prob, sol.p, f * sol.min_se);
                CHECK(r.reached);
            }

            const MMFSolution again = mmf_solve(prob);
            CHECK(again.p == sol.p);
            CHECK(again.min_se == sol.min_se);

            MMFProblem noisy = prob;
            noisy.sys.sigma2 *= 1e6;
            CHECK(mmf_solve(noisy).min_se <= sol.min_se);
        }
    }
}
