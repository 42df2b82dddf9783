#pragma once

// Brute-force references shared by the unit and acceptance suites.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cure/powerctl.hpp"
#include "cure/ris.hpp"

namespace cure::test {

/// max over a `points`-per-element phase grid of |h + alpha sum e^{i theta_n} c_n|^2.
inline double grid_max_power(cdouble h, const Eigen::VectorXcd& c, double alpha, int points) {
    const int N = static_cast<int>(c.size());
    std::vector<std::vector<cdouble>> terms(N, std::vector<cdouble>(points));
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < points; ++k)
            terms[n][k] = alpha * std::polar(1.0, 2 * std::numbers::pi * k / points) * c(n);
    double best = std::norm(h);
    // odometer over the grid with running partial sums
    std::vector<int> idx(N, 0);
    std::vector<cdouble> partial(N + 1);
    partial[0] = h;
    for (int n = 0; n < N; ++n) partial[n + 1] = partial[n] + terms[n][0];
    while (true) {
        best = std::max(best, std::norm(partial[N]));
        int n = N - 1;
        while (n >= 0 && ++idx[n] == points) idx[n--] = 0;
        if (n < 0) break;
        for (int k = n; k < N; ++k) partial[k + 1] = partial[k] + terms[k][idx[k]];
    }
    return best;
}

/// Relative power loss allowed by a phase grid with spacing 2 pi / points.
inline double grid_slack(int points) {
    const double half = std::numbers::pi / points;
    return 2 * half * half;
}

/// E{|sum_m sum_u sqrt(p_mu) w_mu^H h_ju s_m|^2} with freshly drawn unit
/// symbols, `symbols` per channel realization.
inline Eigen::VectorXd fresh_symbol_input_power(const ChannelEnsemble& ens, const PrecodingVectors& w,
                                                const PowerCoefficients& p, int symbols,
                                                std::mt19937_64& rng) {
    const int J = static_cast<int>(p.rows());
    const int U = w.aps;
    const int N = w.antennas;
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    Eigen::VectorXd out = Eigen::VectorXd::Zero(J);
    Eigen::VectorXcd s(J);
    for (int r = 0; r < ens.size(); ++r) {
        const auto& h = ens.h[r];
        const auto& wr = w.w[r];
        for (int k = 0; k < symbols; ++k) {
            for (int m = 0; m < J; ++m) s(m) = cdouble(g(rng), g(rng));
            for (int j = 0; j < J; ++j) {
                cdouble y = 0;
                for (int m = 0; m < J; ++m)
                    for (int u = 0; u < U; ++u)
                        y += std::sqrt(p(m, u)) *
                             wr.col(m).segment(u * N, N).dot(h.col(j).segment(u * N, N)) * s(m);
                out(j) += std::norm(y);
            }
        }
    }
    return out / (double(ens.size()) * symbols);
}

struct GridOptimum {
    double min_se = 0;
    double resolution = 0;  // largest min-SE change between neighbouring grid points
};

/// Exhaustive max-min over a points x points grid for J = 2, U = 1, where
/// the budget is split as (p0, p1) with p0 + p1 <= rho_d.
inline GridOptimum grid_mmf_two_users(const MMFProblem& prob, int points) {
    const double rho = prob.sys.rho_d;
    Eigen::MatrixXd val(points, points);
    for (int a = 0; a < points; ++a)
        for (int b = 0; b < points; ++b) {
            const double p0 = rho * a / (points - 1);
            const double p1 = rho * b / (points - 1);
            if (p0 + p1 > rho * (1 + 1e-12)) {
                val(a, b) = -1;
                continue;
            }
            PowerCoefficients p(2, 1);
            p << p0, p1;
            val(a, b) = evaluate(prob, p).min_se;
        }
    GridOptimum out;
    out.min_se = val.maxCoeff();
    for (int a = 0; a < points; ++a)
        for (int b = 0; b < points; ++b) {
            if (val(a, b) < 0) continue;
            if (a + 1 < points && val(a + 1, b) >= 0)
                out.resolution = std::max(out.resolution, std::abs(val(a + 1, b) - val(a, b)));
            if (b + 1 < points && val(a, b + 1) >= 0)
                out.resolution = std::max(out.resolution, std::abs(val(a, b + 1) - val(a, b)));
        }
    return out;
}

}  // namespace cure::test
