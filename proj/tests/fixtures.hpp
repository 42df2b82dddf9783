#pragma once

#include <random>

#include "cure/sim.hpp"

namespace cure::test {

/// Small physical scenario: U APs on a 60 m square, J users, N antennas.
inline ScenarioSpec small_spec(int aps = 4, int users = 3, int antennas = 2) {
    ScenarioSpec spec = default_scenario();
    spec.ap_count = aps;
    spec.user_count = users;
    spec.antennas = antennas;
    spec.coverage_m = 60;
    spec.ris_count = aps > 1 ? 2 : 1;
    spec.ris_elements = 16;
    spec.strategy = aps > 1 ? DeploymentStrategy::Hybrid : DeploymentStrategy::Edge;
    spec.setups = 3;
    spec.mc_realizations = 200;
    derive_system(spec);
    validate(spec);
    return spec;
}

struct Pipeline {
    NetworkLayout layout;
    LargeScaleParams ls;
    ChannelEnsemble ens;
    ChannelEstimates est;
    PrecodingVectors w;
    StatTerms st;
};

inline Pipeline make_pipeline(const ScenarioSpec& spec, long long seed) {
    Pipeline p;
    auto ur = make_stream(seed, Stream::Users);
    auto sr = make_stream(seed, Stream::Shadowing);
    auto fr = make_stream(seed, Stream::Fading);
    auto pr = make_stream(seed, Stream::PilotNoise);
    p.layout = make_layout(spec, ur);
    p.ls = large_scale(p.layout, spec.system, spec.antennas, sr);
    p.ens = draw_channels(p.ls, spec.mc_realizations, fr);
    p.est = lmmse_estimate(p.ens, p.ls, spec.system, pr);
    p.w = mrt_precoders(p.est, spec.ap_count, spec.antennas);
    p.st = stat_terms(p.ens, p.w);
    return p;
}

inline MMFProblem make_small_problem(const ScenarioSpec& spec, long long seed) {
    Pipeline p = make_pipeline(spec, seed);
    return make_problem(std::move(p.st), spec.system, spec.rectifier, spec.mode, spec.eh_model);
}

/// Single-AP, single-antenna large-scale parameters with one user per entry.
inline LargeScaleParams scalar_large_scale(int users, double beta, double kappa, int pilots = 5) {
    LargeScaleParams ls = make_large_scale(1, users, 1, pilots);
    for (int j = 0; j < users; ++j) set_rician(ls, j, 0, beta, kappa, Eigen::VectorXcd::Ones(1));
    return ls;
}

/// Layout-free statistics: beta log-uniform in [1e-7, 1e-5], K-factor in
/// [0, 10] dB, random steering angles.
inline LargeScaleParams random_large_scale(int aps, int users, int antennas, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LargeScaleParams ls = make_large_scale(aps, users, antennas, 5);
    for (int j = 0; j < users; ++j)
        for (int u = 0; u < aps; ++u) {
            const double beta = std::pow(10.0, -7 + 2 * unit(rng));
            const double kappa = db_to_linear(10 * unit(rng));
            set_rician(ls, j, u, beta, kappa, ula_steering(antennas, 2 * unit(rng) - 1));
        }
    return ls;
}

/// Channels, estimates, precoders and statistics on given large-scale
/// parameters.
inline Pipeline make_pipeline(const LargeScaleParams& ls, const SystemParams& sys, int realizations,
                              long long seed) {
    Pipeline p;
    p.ls = ls;
    auto fr = make_stream(seed, Stream::Fading);
    auto pr = make_stream(seed, Stream::PilotNoise);
    p.ens = draw_channels(p.ls, realizations, fr);
    p.est = lmmse_estimate(p.ens, p.ls, sys, pr);
    p.w = mrt_precoders(p.est, ls.aps, ls.antennas);
    p.st = stat_terms(p.ens, p.w);
    return p;
}

}  // namespace cure::test
