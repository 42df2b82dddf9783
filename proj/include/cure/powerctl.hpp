#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cure/config.hpp"
#include "cure/ris.hpp"
#include "cure/wpt.hpp"

namespace cure {

/// Hyperparameters of the bisection / projected-subgradient solver.
struct SolverOptions {
    int max_iters = 500;         // per feasibility call
    int bisection_rounds = 30;
    double rel_tol = 1e-4;       // stop when hi - lo <= rel_tol * hi
    double step0 = 0.5;          // initial step, fraction of the per-AP budget radius
    double active_tol = 1e-2;    // users within this relative gap of the minimum share the ascent
};

struct MMFProblem {
    StatTerms st;
    SystemParams sys;
    std::vector<RectifierParams> rect;  // one per user
    TransmissionMode mode = TransmissionMode::Coherent;
    HarvesterModel eh_model = HarvesterModel::NonLinear;
    std::optional<RisBoost> ris_boost;
    SolverOptions options;
};

MMFProblem make_problem(StatTerms st, const SystemParams& sys, const RectifierParams& rect,
                        TransmissionMode mode, HarvesterModel eh_model,
                        std::optional<RisBoost> boost = std::nullopt);

/// Every per-user quantity at one power allocation.
struct Evaluation {
    Eigen::VectorXd input_power;
    Eigen::VectorXd energy;
    Eigen::VectorXd uplink_power;
    Eigen::VectorXd sinr;
    Eigen::VectorXd se;
    double min_se = 0;
};

Evaluation evaluate(const MMFProblem& prob, const PowerCoefficients& p);

struct TraceRow {
    int iteration = 0;
    double target = 0;
    double min_se = 0;
};

struct MMFSolution {
    PowerCoefficients p;
    double min_se = 0;
    Eigen::VectorXd per_user_se;
    Eigen::VectorXd per_user_energy;
    Eigen::VectorXd per_user_input;
    int iterations = 0;
    bool feasible = false;
    std::vector<TraceRow> trace;
};

/// Harvested energy spent evenly over the uplink samples.
template <typename Scalar>
Scalar uplink_power_from_energy(Scalar energy, int delta_u) {
    return energy / Scalar(delta_u);
}

/// Use-and-then-forget SINR with MR combining built from the precoders.
Eigen::VectorXd uplink_sinr(const Eigen::VectorXd& p_ul, const StatTerms& st, const SystemParams& sys);

/// As above with |E{v_j^H h_j}| replaced by `desired_amplitude`; the
/// desired-signal variance keeps its unboosted value.
Eigen::VectorXd uplink_sinr(const Eigen::VectorXd& p_ul, const StatTerms& st, const SystemParams& sys,
                            const Eigen::VectorXd& desired_amplitude);

template <typename Scalar>
Scalar spectral_efficiency(Scalar sinr, const SystemParams& sys) {
    return Scalar(sys.delta_u) / Scalar(sys.delta_c) * std::log2(Scalar(1) + sinr);
}

/// min(rates) >= t - 1e-9. Throws on an empty list.
bool feasibility(std::span<const double> rates, double t);

/// p_ju = rho_d / J on every AP.
MMFSolution equal_power_baseline(const MMFProblem& prob);

/// Upper bound on the achievable minimum SE from a per-user full-power
/// relaxation.
double se_upper_bound(const MMFProblem& prob);

struct AscentResult {
    PowerCoefficients p;
    double min_se = 0;
    int iterations = 0;
    bool reached = false;
};

/// Projected subgradient ascent on min_j SE_j from `warm`, stopping as soon
/// as the minimum reaches `target`. Returns the best point visited.
AscentResult feasibility_ascent(const MMFProblem& prob, const PowerCoefficients& warm, double target);

/// Bisection on the common SE target with feasibility_ascent as the
/// feasibility oracle, warm-started at the equal-power point.
MMFSolution mmf_solve(const MMFProblem& prob);

}  // namespace cure
