#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cure/wpt.hpp"
#include "fixtures.hpp"

using namespace cure;

namespace {

ChannelEstimates single_estimate(const Eigen::MatrixXcd& hhat) {
    ChannelEstimates e;
    e.hhat.push_back(hhat);
    e.error_trace = Eigen::MatrixXd::Zero(hhat.cols(), 1);
    return e;
}

PrecodingVectors unit_precoders(int users, int aps, double norm2) {
    PrecodingVectors w;
    w.aps = aps;
    w.antennas = 1;
    w.mean_norm2 = Eigen::MatrixXd::Constant(users, aps, norm2);
    return w;
}

// Every entry of A_0^(0) equal to a, single user, U APs.
StatTerms flat_terms(int aps, double a) {
    StatTerms st = make_stat_terms(aps, 1);
    st.block(0, 0) = Eigen::MatrixXcd::Constant(aps, aps, a);
    return st;
}

}  // namespace

TEST_CASE("MRT normalization") {
    Eigen::MatrixXcd h(2, 1);
    h << 2.0, 0.0;
    const PrecodingVectors w = mrt_precoders(single_estimate(h), 1, 2);
    CHECK(w.w[0](0, 0) == cdouble(1.0, 0.0));
    CHECK(w.w[0](1, 0) == cdouble(0.0, 0.0));

    const ScenarioSpec spec = test::small_spec(4, 3, 2);
    const test::Pipeline p = test::make_pipeline(spec, 9);
    ChannelEstimates scaled = p.est;
    for (auto& m : scaled.hhat) m *= 7.0;
    const PrecodingVectors w7 = mrt_precoders(scaled, spec.ap_count, spec.antennas);
    for (std::size_t r = 0; r < w7.w.size(); ++r)
        CHECK((w7.w[r] - p.w.w[r]).norm() <= 1e-12 * p.w.w[r].norm());
    for (int j = 0; j < spec.user_count; ++j)
        for (int u = 0; u < spec.ap_count; ++u)
            CHECK(std::abs(p.w.mean_norm2(j, u) - 1.0) <= 0.01);
}

TEST_CASE("all-zero estimate names the pair") {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Ones(4, 2);
    h.col(1).segment(2, 2).setZero();
    try {
        mrt_precoders(single_estimate(h), 2, 2);
        FAIL("expected an error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("user 1, AP 1") != std::string::npos);
    }
}

TEST_CASE("per-AP transmit power") {
    const PrecodingVectors w = unit_precoders(4, 2, 1.0);
    const Eigen::VectorXd P = ap_transmit_power(Eigen::MatrixXd::Constant(4, 2, 0.1), w);
    CHECK(P(0) == doctest::Approx(0.4));
    CHECK(P(1) == doctest::Approx(0.4));
    CHECK(ap_transmit_power(Eigen::MatrixXd::Zero(4, 2), w).isZero(0));
    const PrecodingVectors w2 = unit_precoders(1, 1, 2.0);
    CHECK(ap_transmit_power(Eigen::MatrixXd::Constant(1, 1, 0.3), w2)(0) == doctest::Approx(0.6));
    CHECK_THROWS_AS(ap_transmit_power(Eigen::MatrixXd::Zero(3, 2), w), ValidationError);
}

TEST_CASE("power constraint check") {
    Eigen::VectorXd P(3);
    P << 0.625, 0.63, 0.0;
    const auto ok = check_power_constraint(P, 0.625);
    CHECK(ok(0));
    CHECK_FALSE(ok(1));
    CHECK(ok(2));
}

TEST_CASE("deterministic channels give rank-one blocks") {
    // Fixed h and w in every realization.
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd h(6, 2);
    Eigen::MatrixXcd w(6, 2);
    for (Eigen::Index k = 0; k < h.size(); ++k) {
        h(k) = cdouble(g(rng), g(rng));
        w(k) = cdouble(g(rng), g(rng));
    }
    ChannelEnsemble ens;
    PrecodingVectors pv;
    pv.aps = 3;
    pv.antennas = 2;
    for (int r = 0; r < 100; ++r) {
        ens.h.push_back(h);
        ens.phase.push_back(Eigen::MatrixXd::Zero(2, 3));
        pv.w.push_back(w);
    }
    const StatTerms st = stat_terms(ens, pv);
    for (int j = 0; j < 2; ++j)
        for (int m = 0; m < 2; ++m) {
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(st.block(j, m));
            const Eigen::VectorXd ev = es.eigenvalues();
            CHECK(std::abs(ev(0)) <= 1e-12 * ev(2));
            CHECK(std::abs(ev(1)) <= 1e-12 * ev(2));
        }
}

TEST_CASE("stat terms are PSD") {
    const ScenarioSpec spec = test::small_spec(4, 3, 2);
    const test::Pipeline p = test::make_pipeline(spec, 21);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 3; ++m) {
            const Eigen::MatrixXd A = p.st.block(j, m).real();
            const double scale = A.norm();
            for (int k = 0; k < 1000; ++k) {
                Eigen::VectorXd q(4);
                for (int u = 0; u < 4; ++u) q(u) = g(rng);
                CHECK(q.dot(A * q) >= -1e-12 * scale * q.squaredNorm());
            }
        }
    CHECK(p.st.uplink_second.minCoeff() >= 0);
    for (int j = 0; j < 3; ++j)
        CHECK(p.st.uplink_second(j, j) >= std::norm(p.st.uplink_mean(j)) * (1 - 1e-12));
}

TEST_CASE("sample moments converge like 1/n") {
    const LargeScaleParams ls = test::scalar_large_scale(2, 1e-6, 2.0);
    SystemParams sys;
    auto entry_variance = [&](int M) {
        const int reps = 300;
        double s = 0;
        double s2 = 0;
        for (int k = 0; k < reps; ++k) {
            auto fr = make_stream(1000 + k, Stream::Fading);
            auto pr = make_stream(1000 + k, Stream::PilotNoise);
            const ChannelEnsemble ens = draw_channels(ls, M, fr);
            const ChannelEstimates est = lmmse_estimate(ens, ls, sys, pr);
            const PrecodingVectors w = mrt_precoders(est, 1, 1);
            const double x = stat_terms(ens, w).block(0, 1)(0, 0).real();
            s += x;
            s2 += x * x;
        }
        return (s2 - s * s / reps) / (reps - 1);
    };
    const double ratio = entry_variance(100) / entry_variance(200);
    CHECK(ratio >= 2.0 / 1.5);
    CHECK(ratio <= 2.0 * 1.5);
}

TEST_CASE("coherent and non-coherent input power") {
    const double a = 3e-7;
    const StatTerms st = flat_terms(2, a);
    Eigen::MatrixXd p(1, 2);
    p << 0.2, 0.45;
    const double coherent = a * std::pow(std::sqrt(0.2) + std::sqrt(0.45), 2);
    CHECK(input_power(p, st, TransmissionMode::Coherent)(0) == doctest::Approx(coherent).epsilon(1e-12));
    CHECK(input_power(p, st, TransmissionMode::NonCoherent)(0) ==
          doctest::Approx(a * 0.65).epsilon(1e-12));
    CHECK(input_power(p, st, TransmissionMode::NonCoherent)(0) <=
          input_power(p, st, TransmissionMode::Coherent)(0));

    Eigen::MatrixXd one(1, 2);
    one << 0.0, 0.5;
    CHECK(input_power(one, st, TransmissionMode::Coherent)(0) ==
          doctest::Approx(input_power(one, st, TransmissionMode::NonCoherent)(0)).epsilon(1e-14));

    for (auto mode : {TransmissionMode::Coherent, TransmissionMode::NonCoherent})
        CHECK(input_power(Eigen::MatrixXd::Zero(1, 2), st, mode).isZero(0));
}

TEST_CASE("input power homogeneity and linearity") {
    const ScenarioSpec spec = test::small_spec(4, 3, 2);
    const test::Pipeline pl = test::make_pipeline(spec, 33);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 0.2);
    for (int k = 0; k < 20; ++k) {
        Eigen::MatrixXd p(3, 4);
        Eigen::MatrixXd p2(3, 4);
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            p(i) = U(rng);
            p2(i) = U(rng);
        }
        const double c = 0.1 + 5 * U(rng);
        for (auto mode : {TransmissionMode::Coherent, TransmissionMode::NonCoherent}) {
            const Eigen::VectorXd I = input_power(p, pl.st, mode);
            const Eigen::VectorXd Ic = input_power(c * p, pl.st, mode);
            CHECK((Ic - c * I).norm() <= 1e-12 * Ic.norm());
        }
        const Eigen::VectorXd lhs = input_power_noncoherent(p + p2, pl.st);
        const Eigen::VectorXd rhs = input_power_noncoherent(p, pl.st) + input_power_noncoherent(p2, pl.st);
        CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }
}

TEST_CASE("quadratic form matches fresh-symbol averaging") {
    std::mt19937_64 lrng(5);
    const test::Pipeline pl =
        test::make_pipeline(test::random_large_scale(2, 2, 2, lrng), SystemParams{}, 4000, 5);
    Eigen::MatrixXd p(2, 2);
    p << 0.3, 0.1, 0.2, 0.4;
    const Eigen::VectorXd I = input_power(p, pl.st, TransmissionMode::Coherent);

    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const int symbols = 8;
    Eigen::VectorXd brute = Eigen::VectorXd::Zero(2);
    for (int r = 0; r < pl.ens.size(); ++r) {
        const auto& h = pl.ens.h[r];
        const auto& w = pl.w.w[r];
        for (int s = 0; s < symbols; ++s) {
            const cdouble s0(g(rng), g(rng));
            const cdouble s1(g(rng), g(rng));
            for (int j = 0; j < 2; ++j) {
                cdouble y = 0;
                for (int u = 0; u < 2; ++u) {
                    const auto hj = h.col(j).segment(u * 2, 2);
                    y += std::sqrt(p(0, u)) * w.col(0).segment(u * 2, 2).dot(hj) * s0;
                    y += std::sqrt(p(1, u)) * w.col(1).segment(u * 2, 2).dot(hj) * s1;
                }
                brute(j) += std::norm(y);
            }
        }
    }
    brute /= double(pl.ens.size()) * symbols;
    for (int j = 0; j < 2; ++j) CHECK(std::abs(brute(j) - I(j)) <= 0.03 * I(j));
}

TEST_CASE("rectifier model") {
    const RectifierParams rect{2.0, 1.0, 1.0};
    CHECK(harvested_energy(1.0, rect, 25, HarvesterModel::NonLinear) == 25.0);
    CHECK(harvested_energy(0.0, rect, 25, HarvesterModel::NonLinear) == 0.0);
    CHECK(harvested_energy(0.0, rect, 25, HarvesterModel::Linear) == 0.0);
    CHECK(harvested_energy(1e9, rect, 25, HarvesterModel::NonLinear) == doctest::Approx(50.0).epsilon(1e-3));
    const RectifierParams flat{2.0, 0.0, 1.0};
    for (double I : {1e-9, 0.5, 3.0})
        CHECK(harvested_energy(I, rect, 25, HarvesterModel::Linear) ==
              harvested_energy(I, flat, 25, HarvesterModel::NonLinear));

    double prev = 0;
    for (double I = 1e-6; I < 1e3; I *= 1.7) {
        const double e = harvested_energy(I, rect, 25, HarvesterModel::NonLinear);
        CHECK(e > prev);
        CHECK(e < 50.0);
        const double h = 1e-6 * I;
        const double fd = (harvested_energy(I + h, rect, 25, HarvesterModel::NonLinear) -
                           harvested_energy(I - h, rect, 25, HarvesterModel::NonLinear)) /
                          (2 * h);
        CHECK(harvested_energy_slope(I, rect, 25, HarvesterModel::NonLinear) ==
              doctest::Approx(fd).epsilon(1e-6));
        prev = e;
    }
}
