#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "cure/channel.hpp"
#include "cure/config.hpp"
#include "cure/geometry.hpp"
#include "cure/wpt.hpp"

namespace cure {

struct RISPanel {
    int n_elements = 0;
    double alpha = 1.0;
    Eigen::VectorXd theta;
    Position position = Position::Zero();
};

/// Deterministic AP -> panel -> user link through one panel.
struct CascadedChannel {
    Eigen::VectorXcd h_ur;
    Eigen::VectorXcd h_jr;
    double beta_ur = 0;
    double beta_jr = 0;
    double beta_ris = 0;
};

/// ((1/N) sum_n |[h_ur]_n [h_jr]_n|)^2, zero for an empty panel.
template <typename DerivedA, typename DerivedB>
double cascaded_gain(const Eigen::MatrixBase<DerivedA>& h_ur, const Eigen::MatrixBase<DerivedB>& h_jr) {
    if (h_ur.size() == 0) return 0.0;
    const double mean = h_ur.cwiseProduct(h_jr).cwiseAbs().mean();
    return mean * mean;
}

CascadedChannel make_cascaded(Eigen::VectorXcd h_ur, Eigen::VectorXcd h_jr, double beta_ur,
                              double beta_jr);

/// Half-wavelength element row along x centred on the panel.
std::vector<Position> element_positions(const Position& centre, int n_elements, double wavelength);

/// Per-element plane-free phases from exact element distances; each hop's
/// gain follows the large-scale path-loss law without shadowing.
CascadedChannel cascaded_channels(const NetworkLayout& layout, int ris_index, int ap, int user,
                                  int n_elements, const SystemParams& sys);

/// theta_n = arg(h_direct) - arg([h_ur]_n [h_jr]_n), wrapped to [0, 2 pi).
Eigen::VectorXd optimal_phases(cdouble h_direct, const CascadedChannel& cc);

/// h_direct + alpha sum_n e^{i theta_n} [h_ur]_n [h_jr]_n.
cdouble received_amplitude(cdouble h_direct, const RISPanel& panel, const CascadedChannel& cc);

/// log2(1 + x (sqrt(beta_ju) + N alpha sqrt(beta_ris))^2 / sigma2).
template <typename Scalar>
Scalar ris_rate(Scalar x, Scalar sigma2, Scalar beta_ju, Scalar beta_ris, Scalar alpha, int n_elements) {
    const Scalar amp = std::sqrt(beta_ju) + Scalar(n_elements) * alpha * std::sqrt(beta_ris);
    return std::log2(Scalar(1) + x * amp * amp / sigma2);
}

/// Panel with the largest cascaded gain for the (AP, user) pair; ties go to
/// the lowest index. Returns -1 when there are no panels.
int assign_ris(const NetworkLayout& layout, int ap, int user, int n_elements, const SystemParams& sys);

/// Amplitude gains applied to the desired-signal mean of each (user, AP)
/// link. gain(j,u) = 1 + N alpha sqrt(beta_ris) / sqrt(beta_ju); share(j)
/// is the fraction of downlink samples user j receives its configuration,
/// 1 / (users served by its busiest panel).
struct RisBoost {
    Eigen::MatrixXd gain;
    Eigen::VectorXd share;
    Eigen::MatrixXi assignment;  // J x U panel index
};

RisBoost make_ris_boost(const NetworkLayout& layout, const LargeScaleParams& ls, int n_elements,
                        double alpha, const SystemParams& sys);

/// Identity boost (gain 1, share 0) for J users and U APs.
RisBoost no_boost(int users, int aps);

/// Extra rectifier input power from the reflected paths at power p.
Eigen::VectorXd boost_increment(const StatTerms& st, const PowerCoefficients& p,
                                TransmissionMode mode, const RisBoost& boost);

Eigen::VectorXd boost_input_power(const Eigen::VectorXd& base, const StatTerms& st,
                                  const PowerCoefficients& p, TransmissionMode mode,
                                  const RisBoost& boost);

/// |E{v_j^H h_j}| with the reflected amplitude added in phase.
Eigen::VectorXd boosted_uplink_amplitude(const StatTerms& st, const RisBoost& boost);

/// One configured panel per (panel, user) pair in assignment order, phases
/// aligned to the strongest AP link the panel serves for that user.
std::vector<RISPanel> configure_panels(const NetworkLayout& layout, const LargeScaleParams& ls,
                                       const RisBoost& boost, int n_elements, double alpha,
                                       const SystemParams& sys, std::vector<int>* panel_index = nullptr);

}  // namespace cure
