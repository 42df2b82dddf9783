#pragma once

#include <cmath>
#include <string>

#include "cure/error.hpp"

namespace cure {

enum class TransmissionMode { Coherent, NonCoherent };
enum class HarvesterModel { Linear, NonLinear };
enum class DeploymentStrategy { Edge, Central, Hybrid };

std::string to_string(TransmissionMode m);
std::string to_string(HarvesterModel m);
std::string to_string(DeploymentStrategy s);
TransmissionMode parse_mode(const std::string& s);
HarvesterModel parse_eh_model(const std::string& s);
DeploymentStrategy parse_strategy(const std::string& s);

/// Converts a dBm level to watts.
template <typename Scalar>
Scalar noise_power_from_dbm(Scalar dbm) {
    return std::pow(Scalar(10), (dbm - Scalar(30)) / Scalar(10));
}

template <typename Scalar>
Scalar db_to_linear(Scalar db) {
    return std::pow(Scalar(10), db / Scalar(10));
}

inline constexpr double kSpeedOfLight = 299792458.0;

/// Physical constants of one coherence block and the radio front end.
///
/// The block is split into pilot, downlink energy and uplink data samples;
/// `delta_u` is always derived from the other three.
struct SystemParams {
    int delta_c = 200;
    int delta_p = 5;
    int delta_d = 25;
    int delta_u = 170;
    double rho_p = 1e-7;         // W
    double rho_d = 10.0 / 16.0;  // W, per AP
    double sigma2 = noise_power_from_dbm(-96.0);
    double f_c = 3.4e9;  // Hz
    double sigma_sf_los = 3.0;
    double sigma_sf_nlos = 4.0;

    double wavelength() const { return kSpeedOfLight / f_c; }
    bool operator==(const SystemParams&) const = default;
};

/// Rectifier curve-fit constants, E = delta_d*A*I / (B*I + C).
struct RectifierParams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    bool operator==(const RectifierParams&) const = default;
};

struct ScenarioSpec {
    SystemParams system;
    RectifierParams rectifier;

    // File-level quantities that `system` is derived from.
    double total_power_w = 10.0;
    double noise_dbm = -96.0;
    double carrier_ghz = 3.4;

    int ap_count = 16;
    int antennas = 4;
    int user_count = 8;
    int ris_count = 4;
    int ris_elements = 32;
    double ris_alpha = 1.0;

    double coverage_m = 100.0;
    double ap_height_m = 25.0;
    double ris_height_m = 10.0;
    double user_height_m = 1.0;

    TransmissionMode mode = TransmissionMode::Coherent;
    HarvesterModel eh_model = HarvesterModel::NonLinear;
    DeploymentStrategy strategy = DeploymentStrategy::Hybrid;

    int setups = 50;
    long long seed = 1;
    int mc_realizations = 500;

    bool operator==(const ScenarioSpec&) const = default;
};

/// Reference physical parameters with the desk-scale geometry.
ScenarioSpec default_scenario();

/// Recomputes `system` fields that follow from file-level values
/// (delta_u, rho_d, sigma2, f_c).
void derive_system(ScenarioSpec& spec);

/// Throws ValidationError naming the first violated invariant.
void validate(const ScenarioSpec& spec);

/// Parses the `key = value` scenario format. Omitted keys keep their
/// defaults; the result is derived and validated.
ScenarioSpec parse_scenario(const std::string& text);
ScenarioSpec load_scenario(const std::string& path);

/// Writes every key, so parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const ScenarioSpec& spec);

}  // namespace cure
