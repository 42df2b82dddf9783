#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cure/channel.hpp"
#include "cure/config.hpp"

namespace cure {

/// Downlink power coefficients p_ju in watts, J x U.
using PowerCoefficients = Eigen::MatrixXd;

/// MRT precoders in the stacked channel layout, one matrix per realization.
struct PrecodingVectors {
    std::vector<Eigen::MatrixXcd> w;
    Eigen::MatrixXd mean_norm2;  // J x U, empirical E{||w_ju||^2}
    int aps = 0;
    int antennas = 0;
};

PrecodingVectors mrt_precoders(const ChannelEstimates& estimates, int aps, int antennas);

/// Sample moments of the effective gains g_jmu = w_mu^H h_ju.
///
/// `downlink[j*J + m]` is the U x U matrix A_j^(m) with entries
/// E{g_jmu conj(g_jmu')}. The uplink entries use the stacked combiner
/// v_j = [w_j1; ...; w_jU], so v_j^H h_m = sum_u g_mju.
struct StatTerms {
    int aps = 0;
    int users = 0;
    int realizations = 0;
    std::vector<Eigen::MatrixXcd> downlink;
    Eigen::MatrixXcd desired_mean;    // J x U, E{g_jju}
    Eigen::MatrixXd uplink_second;    // J x J, (j,m) -> E{|v_j^H h_m|^2}
    Eigen::VectorXcd uplink_mean;     // E{v_j^H h_j}
    Eigen::VectorXd combiner_power;   // E{||v_j||^2}

    const Eigen::MatrixXcd& block(int j, int m) const {
        return downlink[static_cast<std::size_t>(j) * users + m];
    }
    Eigen::MatrixXcd& block(int j, int m) {
        return downlink[static_cast<std::size_t>(j) * users + m];
    }
    double noncoherent(int j, int m, int u) const { return block(j, m)(u, u).real(); }
};

StatTerms make_stat_terms(int aps, int users);

StatTerms stat_terms(const ChannelEnsemble& ensemble, const PrecodingVectors& w);

/// P_u = sum_j p_ju E{||w_ju||^2}.
Eigen::VectorXd ap_transmit_power(const PowerCoefficients& p, const PrecodingVectors& w);

inline constexpr double kPowerSlack = 1e-9;

/// Per-AP pass flags for P_u <= rho_d + 1e-9.
Eigen::Array<bool, Eigen::Dynamic, 1> check_power_constraint(const Eigen::VectorXd& ap_power,
                                                             double rho_d);

/// I_j = sum_m q_m^T A_j^(m) q_m with q_mu = sqrt(p_mu).
Eigen::VectorXd input_power_coherent(const Eigen::MatrixXd& q, const StatTerms& st);

/// I_j = sum_m sum_u p_mu E{|g_jmu|^2}.
Eigen::VectorXd input_power_noncoherent(const PowerCoefficients& p, const StatTerms& st);

Eigen::VectorXd input_power(const PowerCoefficients& p, const StatTerms& st, TransmissionMode mode);

/// Rectifier output over delta_d samples. The linear model drops the
/// saturation term (B = 0).
template <typename Scalar>
Scalar harvested_energy(Scalar input_power, const RectifierParams& rect, int delta_d,
                        HarvesterModel model) {
    const Scalar num = Scalar(delta_d) * Scalar(rect.a) * input_power;
    if (model == HarvesterModel::Linear) return num / Scalar(rect.c);
    return num / (Scalar(rect.b) * input_power + Scalar(rect.c));
}

/// dE/dI of the rectifier model.
template <typename Scalar>
Scalar harvested_energy_slope(Scalar input_power, const RectifierParams& rect, int delta_d,
                              HarvesterModel model) {
    if (model == HarvesterModel::Linear) return Scalar(delta_d) * Scalar(rect.a) / Scalar(rect.c);
    const Scalar den = Scalar(rect.b) * input_power + Scalar(rect.c);
    return Scalar(delta_d) * Scalar(rect.a) * Scalar(rect.c) / (den * den);
}

}  // namespace cure
