#include "cure/wpt.hpp"

#include <cmath>

namespace cure {

PrecodingVectors mrt_precoders(const ChannelEstimates& estimates, int aps, int antennas) {
    if (estimates.hhat.empty()) throw ValidationError("no channel estimates");
    const int J = static_cast<int>(estimates.hhat.front().cols());
    const int M = static_cast<int>(estimates.hhat.size());

    Eigen::MatrixXd norm2 = Eigen::MatrixXd::Zero(J, aps);
    for (const auto& hhat : estimates.hhat)
        for (int j = 0; j < J; ++j)
            for (int u = 0; u < aps; ++u)
                norm2(j, u) += hhat.col(j).segment(u * antennas, antennas).squaredNorm();
    norm2 /= M;

    Eigen::MatrixXd scale(J, aps);
    for (int j = 0; j < J; ++j)
        for (int u = 0; u < aps; ++u) {
            if (!(norm2(j, u) > 0) || !std::isfinite(norm2(j, u)))
                throw NumericalError("all-zero channel estimate for user " + std::to_string(j) +
                                     ", AP " + std::to_string(u));
            scale(j, u) = 1.0 / std::sqrt(norm2(j, u));
        }

    PrecodingVectors out;
    out.aps = aps;
    out.antennas = antennas;
    out.w.reserve(M);
    for (const auto& hhat : estimates.hhat) {
        Eigen::MatrixXcd w = hhat;
        for (int j = 0; j < J; ++j)
            for (int u = 0; u < aps; ++u) w.col(j).segment(u * antennas, antennas) *= scale(j, u);
        out.w.push_back(std::move(w));
    }
    out.mean_norm2 = Eigen::MatrixXd::Zero(J, aps);
    for (const auto& w : out.w)
        for (int j = 0; j < J; ++j)
            for (int u = 0; u < aps; ++u)
                out.mean_norm2(j, u) += w.col(j).segment(u * antennas, antennas).squaredNorm();
    out.mean_norm2 /= M;
    return out;
}

StatTerms make_stat_terms(int aps, int users) {
    StatTerms st;
    st.aps = aps;
    st.users = users;
    st.downlink.assign(static_cast<std::size_t>(users) * users, Eigen::MatrixXcd::Zero(aps, aps));
    st.desired_mean = Eigen::MatrixXcd::Zero(users, aps);
    st.uplink_second = Eigen::MatrixXd::Zero(users, users);
    st.uplink_mean = Eigen::VectorXcd::Zero(users);
    st.combiner_power = Eigen::VectorXd::Zero(users);
    return st;
}

StatTerms stat_terms(const ChannelEnsemble& ensemble, const PrecodingVectors& w) {
    if (ensemble.size() != static_cast<int>(w.w.size()))
        throw ValidationError("channel and precoder ensembles differ in size");
    if (ensemble.size() < 1) throw ValidationError("empty ensemble");
    const int U = w.aps;
    const int N = w.antennas;
    const int J = static_cast<int>(ensemble.h.front().cols());
    const int M = ensemble.size();

    StatTerms st = make_stat_terms(U, J);
    st.realizations = M;

    // gains(j*J + m, u) = w_mu^H h_ju
    Eigen::MatrixXcd gains(static_cast<Eigen::Index>(J) * J, U);
    Eigen::MatrixXcd cross(J, J);
    for (int r = 0; r < M; ++r) {
        const Eigen::MatrixXcd& h = ensemble.h[r];
        const Eigen::MatrixXcd& wr = w.w[r];
        for (int u = 0; u < U; ++u) {
            // cross(m, j) = w_mu^H h_ju
            cross.noalias() = wr.middleRows(u * N, N).adjoint() * h.middleRows(u * N, N);
            for (int j = 0; j < J; ++j)
                for (int m = 0; m < J; ++m) gains(j * J + m, u) = cross(m, j);
        }
        for (int j = 0; j < J; ++j) {
            for (int m = 0; m < J; ++m) {
                const auto g = gains.row(j * J + m);
                st.block(j, m).noalias() += g.transpose() * g.conjugate();
            }
            for (int u = 0; u < U; ++u) st.desired_mean(j, u) += gains(j * J + j, u);
        }
        // v_j^H h_m = sum_u w_ju^H h_mu = sum_u gains(m*J + j, u)
        for (int j = 0; j < J; ++j) {
            for (int m = 0; m < J; ++m) {
                const cdouble v = gains.row(m * J + j).sum();
                st.uplink_second(j, m) += std::norm(v);
                if (m == j) st.uplink_mean(j) += v;
            }
            st.combiner_power(j) += wr.col(j).squaredNorm();
        }
    }

    const double inv = 1.0 / M;
    for (auto& a : st.downlink) {
        a *= inv;
        a = (0.5 * (a + a.adjoint())).eval();
    }
    st.desired_mean *= inv;
    st.uplink_second *= inv;
    st.uplink_mean *= inv;
    st.combiner_power *= inv;
    return st;
}

Eigen::VectorXd ap_transmit_power(const PowerCoefficients& p, const PrecodingVectors& w) {
    if (p.rows() != w.mean_norm2.rows() || p.cols() != w.mean_norm2.cols())
        throw ValidationError("power coefficient dimensions do not match the precoders");
    return p.cwiseProduct(w.mean_norm2).colwise().sum().transpose();
}

Eigen::Array<bool, Eigen::Dynamic, 1> check_power_constraint(const Eigen::VectorXd& ap_power,
                                                             double rho_d) {
    return ap_power.array() <= rho_d + kPowerSlack;
}

Eigen::VectorXd input_power_coherent(const Eigen::MatrixXd& q, const StatTerms& st) {
    Eigen::VectorXd I = Eigen::VectorXd::Zero(st.users);
    for (int j = 0; j < st.users; ++j)
        for (int m = 0; m < st.users; ++m) {
            const Eigen::VectorXd qm = q.row(m).transpose();
            I(j) += qm.dot(st.block(j, m).real() * qm);
        }
    return I;
}

Eigen::VectorXd input_power_noncoherent(const PowerCoefficients& p, const StatTerms& st) {
    Eigen::VectorXd I = Eigen::VectorXd::Zero(st.users);
    for (int j = 0; j < st.users; ++j)
        for (int m = 0; m < st.users; ++m)
            I(j) += p.row(m).dot(st.block(j, m).diagonal().real());
    return I;
}

Eigen::VectorXd input_power(const PowerCoefficients& p, const StatTerms& st, TransmissionMode mode) {
    if (mode == TransmissionMode::Coherent) return input_power_coherent(p.cwiseSqrt(), st);
    return input_power_noncoherent(p, st);
}

}  // namespace cure
