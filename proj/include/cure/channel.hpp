#pragma once

#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cure/config.hpp"
#include "cure/geometry.hpp"

namespace cure {

using cdouble = std::complex<double>;

/// Large-scale gain in dB at distance d (clamped to 1 m), before shadowing.
double path_loss_db(double distance_m);

/// Rician K-factor in dB at distance d.
double rician_factor_db(double distance_m);

/// Unit-modulus half-wavelength ULA response, e^{i pi n cos_angle}.
Eigen::VectorXcd ula_steering(int antennas, double cos_angle);

/// Channel statistics per (user j, AP u). Matrices are J x U; the LOS
/// vectors are stacked per user: column j of `los` holds hbar_ju for
/// u = 0..U-1 in consecutive blocks of `antennas` rows.
struct LargeScaleParams {
    int aps = 0;
    int users = 0;
    int antennas = 0;
    Eigen::MatrixXd beta;
    Eigen::MatrixXd kappa;
    Eigen::MatrixXd gamma;
    Eigen::MatrixXcd los;
    Eigen::VectorXi pilot;

    auto hbar(int j, int u) const { return los.col(j).segment(u * antennas, antennas); }
    auto hbar(int j, int u) { return los.col(j).segment(u * antennas, antennas); }
};

/// Allocates a LargeScaleParams with zeroed statistics and round-robin pilots.
LargeScaleParams make_large_scale(int aps, int users, int antennas, int pilot_count);

/// Splits total gain beta into the LOS vector and NLOS variance for a given
/// K-factor (linear, may be +inf).
void set_rician(LargeScaleParams& ls, int j, int u, double beta, double kappa,
                const Eigen::VectorXcd& steering);

LargeScaleParams large_scale(const NetworkLayout& layout, const SystemParams& sys, int antennas,
                             std::mt19937_64& rng);

/// One small-scale draw. h[r] has the same stacked layout as `los`; phase
/// is J x U.
struct ChannelEnsemble {
    std::vector<Eigen::MatrixXcd> h;
    std::vector<Eigen::MatrixXd> phase;

    int size() const { return static_cast<int>(h.size()); }
};

ChannelEnsemble draw_channels(const LargeScaleParams& ls, int realizations, std::mt19937_64& rng);

struct ChannelEstimates {
    std::vector<Eigen::MatrixXcd> hhat;
    Eigen::MatrixXd error_trace;  // J x U, tr of the estimation error covariance
};

/// Pilot-based linear MMSE estimation. The LOS phase is treated as unknown,
/// so each channel is modelled as zero-mean with covariance
/// hbar hbar^H + gamma I. Users sharing a pilot see the same projected
/// observation.
ChannelEstimates lmmse_estimate(const ChannelEnsemble& ensemble, const LargeScaleParams& ls,
                                const SystemParams& sys, std::mt19937_64& rng);

/// Binary dump: "CUREchn1", uint16 U, J, N_ap, 0, then float32 (re, im)
/// pairs ordered realization, user, AP, antenna. Little-endian.
void write_channel_dump(const std::string& path, const ChannelEnsemble& ensemble,
                        const LargeScaleParams& ls);

}  // namespace cure
