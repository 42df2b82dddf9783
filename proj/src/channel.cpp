#include "cure/channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

namespace cure {

double path_loss_db(double distance_m) {
    return -30.5 - 36.7 * std::log10(std::max(distance_m, 1.0));
}

double rician_factor_db(double distance_m) { return 13.0 - 0.03 * distance_m; }

Eigen::VectorXcd ula_steering(int antennas, double cos_angle) {
    Eigen::VectorXcd a(antennas);
    for (int n = 0; n < antennas; ++n)
        a(n) = std::polar(1.0, std::numbers::pi * n * cos_angle);
    return a;
}

LargeScaleParams make_large_scale(int aps, int users, int antennas, int pilot_count) {
    LargeScaleParams ls;
    ls.aps = aps;
    ls.users = users;
    ls.antennas = antennas;
    ls.beta = Eigen::MatrixXd::Zero(users, aps);
    ls.kappa = Eigen::MatrixXd::Zero(users, aps);
    ls.gamma = Eigen::MatrixXd::Zero(users, aps);
    ls.los = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(aps) * antennas, users);
    ls.pilot.resize(users);
    for (int j = 0; j < users; ++j) ls.pilot(j) = j % pilot_count;
    return ls;
}

void set_rician(LargeScaleParams& ls, int j, int u, double beta, double kappa,
                const Eigen::VectorXcd& steering) {
    const double los_share = std::isinf(kappa) ? 1.0 : kappa / (kappa + 1.0);
    ls.beta(j, u) = beta;
    ls.kappa(j, u) = kappa;
    ls.gamma(j, u) = std::isinf(kappa) ? 0.0 : beta / (kappa + 1.0);
    ls.hbar(j, u) = std::sqrt(los_share * beta) * steering;
}

LargeScaleParams large_scale(const NetworkLayout& layout, const SystemParams& sys, int antennas,
                             std::mt19937_64& rng) {
    const int U = static_cast<int>(layout.aps.size());
    const int J = static_cast<int>(layout.users.size());
    LargeScaleParams ls = make_large_scale(U, J, antennas, sys.delta_p);
    std::normal_distribution<double> shadow(0.0, sys.sigma_sf_los);
    for (int j = 0; j < J; ++j) {
        for (int u = 0; u < U; ++u) {
            const Position diff = layout.users[j] - layout.aps[u];
            const double d = diff.norm();
            const double beta_db = path_loss_db(d) + shadow(rng);
            const double kappa = db_to_linear(rician_factor_db(d));
            // Array axis along x; elevation folds into the direction cosine.
            const double cos_angle = d > 0 ? diff.x() / d : 0.0;
            set_rician(ls, j, u, db_to_linear(beta_db), kappa, ula_steering(antennas, cos_angle));
        }
    }
    return ls;
}

ChannelEnsemble draw_channels(const LargeScaleParams& ls, int realizations, std::mt19937_64& rng) {
    if (realizations < 1) throw ValidationError("realizations must be >= 1");
    const int N = ls.antennas;
    std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
    std::normal_distribution<double> gauss(0.0, 1.0);

    ChannelEnsemble ens;
    ens.h.reserve(realizations);
    ens.phase.reserve(realizations);
    for (int r = 0; r < realizations; ++r) {
        Eigen::MatrixXcd h(ls.los.rows(), ls.users);
        Eigen::MatrixXd phi(ls.users, ls.aps);
        for (int j = 0; j < ls.users; ++j) {
            for (int u = 0; u < ls.aps; ++u) {
                phi(j, u) = phase(rng);
                const double sd = std::sqrt(ls.gamma(j, u) / 2);
                const cdouble rot = std::polar(1.0, phi(j, u));
                for (int n = 0; n < N; ++n) {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    h(u * N + n, j) = rot * ls.los(u * N + n, j) + sd * cdouble(re, im);
                }
            }
        }
        ens.h.push_back(std::move(h));
        ens.phase.push_back(std::move(phi));
    }
    return ens;
}

ChannelEstimates lmmse_estimate(const ChannelEnsemble& ensemble, const LargeScaleParams& ls,
                                const SystemParams& sys, std::mt19937_64& rng) {
    if (sys.delta_p < 1) throw ValidationError("delta_p must be >= 1");
    const int U = ls.aps;
    const int J = ls.users;
    const int N = ls.antennas;
    const double pilot_energy = sys.delta_p * sys.rho_p;
    const double amp = std::sqrt(pilot_energy);
    const int pilots = ls.pilot.size() > 0 ? ls.pilot.maxCoeff() + 1 : 0;

    auto covariance = [&](int j, int u) {
        const Eigen::VectorXcd hb = ls.hbar(j, u);
        Eigen::MatrixXcd R = hb * hb.adjoint();
        R.diagonal().array() += ls.gamma(j, u);
        return R;
    };

    // Per (j,u) filter K = amp * R Q^{-1} applied to the projected pilot
    // observation of user j's pilot at AP u.
    std::vector<Eigen::MatrixXcd> filter(static_cast<std::size_t>(J) * U);
    ChannelEstimates out;
    out.error_trace.resize(J, U);
    for (int u = 0; u < U; ++u) {
        for (int t = 0; t < pilots; ++t) {
            Eigen::MatrixXcd Q = sys.sigma2 * Eigen::MatrixXcd::Identity(N, N);
            for (int m = 0; m < J; ++m)
                if (ls.pilot(m) == t) Q += pilot_energy * covariance(m, u);
            Eigen::LLT<Eigen::MatrixXcd> llt(Q);
            if (llt.info() != Eigen::Success || !Q.allFinite())
                throw NumericalError("singular pilot covariance at AP " + std::to_string(u));
            for (int j = 0; j < J; ++j) {
                if (ls.pilot(j) != t) continue;
                const Eigen::MatrixXcd R = covariance(j, u);
                // R Q^{-1} = (Q^{-1} R)^H since both are Hermitian.
                const Eigen::MatrixXcd RQinv = llt.solve(R).adjoint();
                filter[static_cast<std::size_t>(j) * U + u] = amp * RQinv;
                out.error_trace(j, u) =
                    std::max(0.0, (R - pilot_energy * RQinv * R).trace().real());
            }
        }
    }

    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise_sd = std::sqrt(sys.sigma2 / 2);
    out.hhat.reserve(ensemble.size());
    Eigen::MatrixXcd y(static_cast<Eigen::Index>(U) * N, pilots);
    for (const auto& h : ensemble.h) {
        for (int t = 0; t < pilots; ++t)
            for (Eigen::Index k = 0; k < y.rows(); ++k) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                y(k, t) = noise_sd * cdouble(re, im);
            }
        for (int j = 0; j < J; ++j) y.col(ls.pilot(j)) += amp * h.col(j);

        Eigen::MatrixXcd hhat(h.rows(), J);
        for (int j = 0; j < J; ++j)
            for (int u = 0; u < U; ++u)
                hhat.col(j).segment(u * N, N) =
                    filter[static_cast<std::size_t>(j) * U + u] * y.col(ls.pilot(j)).segment(u * N, N);
        out.hhat.push_back(std::move(hhat));
    }
    return out;
}

namespace {

template <typename T>
void put_le(std::ofstream& f, T value) {
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    f.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

}  // namespace

void write_channel_dump(const std::string& path, const ChannelEnsemble& ensemble,
                        const LargeScaleParams& ls) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f.write("CUREchn1", 8);
    put_le<std::uint16_t>(f, static_cast<std::uint16_t>(ls.aps));
    put_le<std::uint16_t>(f, static_cast<std::uint16_t>(ls.users));
    put_le<std::uint16_t>(f, static_cast<std::uint16_t>(ls.antennas));
    put_le<std::uint16_t>(f, 0);
    for (const auto& h : ensemble.h)
        for (int j = 0; j < ls.users; ++j)
            for (Eigen::Index k = 0; k < h.rows(); ++k) {
                put_le<float>(f, static_cast<float>(h(k, j).real()));
                put_le<float>(f, static_cast<float>(h(k, j).imag()));
            }
    if (!f) throw Error("write failed: " + path);
}

}  // namespace cure
