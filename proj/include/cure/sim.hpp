#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cure/channel.hpp"
#include "cure/config.hpp"
#include "cure/geometry.hpp"
#include "cure/powerctl.hpp"
#include "cure/ris.hpp"

namespace cure {

inline constexpr int kMaxRetries = 3;
inline constexpr long long kRetrySeedOffset = 1000000;

/// Independent RNG stream for one stage of one setup draw.
enum class Stream : std::uint32_t { Users = 0, Shadowing = 1, Fading = 2, PilotNoise = 3 };
std::mt19937_64 make_stream(long long seed, Stream stream);

struct SetupResult {
    int setup_index = 0;
    Eigen::VectorXd per_user_se;
    Eigen::VectorXd per_user_energy;
    Eigen::VectorXd per_user_input;
    Eigen::VectorXd per_ap_power;
    double min_se = 0;
    int retries = 0;
    int solver_iterations = 0;
    bool ris_enabled = false;
    bool feasible = false;
};

/// Intermediate products of the accepted draw, for debug dumps.
struct SetupDebug {
    NetworkLayout layout;
    LargeScaleParams large_scale;
    ChannelEnsemble ensemble;
    std::vector<TraceRow> trace;
    std::vector<RISPanel> panels;
    std::vector<int> panel_index;
};

/// Full pipeline for one user drop. Power control is solved on the direct
/// AP links; when panels are present their reflected paths are added at
/// that allocation (passive reflection leaves P_u unchanged).
SetupResult run_setup(const ScenarioSpec& spec, int setup_index, SetupDebug* debug = nullptr,
                      const SolverOptions& options = {});

struct CdfPoint {
    double value = 0;
    double probability = 0;
    bool operator==(const CdfPoint&) const = default;
};

/// Sorted (value, k/n) steps; tied values keep only the highest probability.
std::vector<CdfPoint> empirical_cdf(std::vector<double> values);

/// F(x) for a step CDF (0 below the first value).
double cdf_at(const std::vector<CdfPoint>& cdf, double x);

struct CampaignResult {
    std::vector<SetupResult> setups;
    std::vector<CdfPoint> cdf_se;
    std::vector<CdfPoint> cdf_energy;
    double mean_se = 0;
    double median_se = 0;
    double mean_energy = 0;
    double median_energy = 0;
    double mean_min_se = 0;
    int infeasible = 0;
    int total_retries = 0;
};

/// Runs every setup (in parallel when workers != 1; 0 = hardware threads)
/// and pools feasible setups. Output does not depend on the worker count.
CampaignResult run_campaign(const ScenarioSpec& spec, int workers = 0, const SolverOptions& options = {});

/// Pooling step of run_campaign, exposed for reuse.
CampaignResult aggregate(std::vector<SetupResult> setups);

enum class SweepAxis { RisElements, ApAntennas, RisCount, ApCount, Strategy };
SweepAxis parse_axis(const std::string& s);
std::string to_string(SweepAxis axis);

/// Copy of `spec` with one axis set from its textual value (validated).
ScenarioSpec apply_axis(const ScenarioSpec& spec, SweepAxis axis, const std::string& value);

struct SweepRow {
    std::string axis;
    std::string value;
    double mean_energy = 0;
    double mean_min_se = 0;
};

std::vector<SweepRow> sweep(const ScenarioSpec& spec, SweepAxis axis, const std::vector<std::string>& values,
                            int workers = 0, const SolverOptions& options = {});

}  // namespace cure
