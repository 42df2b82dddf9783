#include "cure/powerctl.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace cure {

MMFProblem make_problem(StatTerms st, const SystemParams& sys, const RectifierParams& rect,
                        TransmissionMode mode, HarvesterModel eh_model, std::optional<RisBoost> boost) {
    MMFProblem prob;
    prob.rect.assign(st.users, rect);
    prob.st = std::move(st);
    prob.sys = sys;
    prob.mode = mode;
    prob.eh_model = eh_model;
    prob.ris_boost = std::move(boost);
    return prob;
}

Eigen::VectorXd uplink_sinr(const Eigen::VectorXd& p_ul, const StatTerms& st, const SystemParams& sys,
                            const Eigen::VectorXd& desired_amplitude) {
    const int J = st.users;
    Eigen::VectorXd sinr(J);
    for (int j = 0; j < J; ++j) {
        const double mean2 = std::norm(st.uplink_mean(j));
        const double den = st.uplink_second.row(j).dot(p_ul) - p_ul(j) * mean2 +
                           sys.sigma2 * st.combiner_power(j);
        if (!(den > 0) || !std::isfinite(den))
            throw NumericalError("non-positive SINR denominator for user " + std::to_string(j));
        sinr(j) = p_ul(j) * desired_amplitude(j) * desired_amplitude(j) / den;
    }
    return sinr;
}

Eigen::VectorXd uplink_sinr(const Eigen::VectorXd& p_ul, const StatTerms& st, const SystemParams& sys) {
    return uplink_sinr(p_ul, st, sys, st.uplink_mean.cwiseAbs());
}

bool feasibility(std::span<const double> rates, double t) {
    if (rates.empty()) throw ValidationError("feasibility check on an empty rate list");
    return *std::min_element(rates.begin(), rates.end()) >= t - 1e-9;
}

namespace {

/// Solver-side view of a problem. Variables x are J x U: q = sqrt(p) in
/// coherent mode, p itself otherwise.
class Kernel {
public:
    explicit Kernel(const MMFProblem& prob) : prob_(prob), st_(prob.st) {
        J_ = st_.users;
        U_ = st_.aps;
        coherent_ = prob.mode == TransmissionMode::Coherent;
        S_.reserve(static_cast<std::size_t>(J_) * J_);
        for (const auto& a : st_.downlink) S_.push_back(a.real());
        boost_ = prob.ris_boost ? *prob.ris_boost : no_boost(J_, U_);
        c_ = st_.desired_mean.cwiseAbs();
        amp_ = boosted_uplink_amplitude(st_, boost_);
        variance_.resize(J_);
        for (int j = 0; j < J_; ++j)
            variance_(j) = std::max(0.0, st_.uplink_second(j, j) - std::norm(st_.uplink_mean(j)));
        if (static_cast<int>(prob.rect.size()) != J_)
            throw ValidationError("rectifier list must have one entry per user");
    }

    int users() const { return J_; }
    int aps() const { return U_; }
    bool coherent() const { return coherent_; }
    double budget() const { return prob_.sys.rho_d; }
    double scale() const { return coherent_ ? std::sqrt(budget()) : budget(); }

    PowerCoefficients to_power(const Eigen::MatrixXd& x) const {
        return coherent_ ? Eigen::MatrixXd(x.cwiseAbs2()) : x;
    }
    Eigen::MatrixXd from_power(const PowerCoefficients& p) const {
        return coherent_ ? Eigen::MatrixXd(p.cwiseMax(0.0).cwiseSqrt()) : Eigen::MatrixXd(p.cwiseMax(0.0));
    }

    void project(Eigen::MatrixXd& x) const {
        x = x.cwiseMax(0.0);
        for (int u = 0; u < U_; ++u) {
            const double used = coherent_ ? x.col(u).squaredNorm() : x.col(u).sum();
            if (used > budget()) x.col(u) *= coherent_ ? std::sqrt(budget() / used) : budget() / used;
        }
    }

    /// Fills per-user state at x; with `grads`, also caches what the
    /// gradient needs.
    void state(const Eigen::MatrixXd& x, Evaluation& ev) {
        const auto& sys = prob_.sys;
        Eigen::VectorXd I = Eigen::VectorXd::Zero(J_);
        if (coherent_) {
            Y_.resize(static_cast<std::size_t>(J_) * J_);
            for (int j = 0; j < J_; ++j)
                for (int k = 0; k < J_; ++k) {
                    auto& y = Y_[idx(j, k)];
                    y.noalias() = S_[idx(j, k)] * x.row(k).transpose();
                    I(j) += x.row(k).dot(y);
                }
            for (int j = 0; j < J_; ++j) {
                const double boosted = x.row(j).dot(boost_.gain.row(j).cwiseProduct(c_.row(j)));
                const double base = x.row(j).dot(c_.row(j));
                I(j) += boost_.share(j) * (boosted * boosted - base * base);
            }
        } else {
            for (int j = 0; j < J_; ++j) {
                for (int k = 0; k < J_; ++k) I(j) += x.row(k).dot(S_[idx(j, k)].diagonal());
                I(j) += boost_.share(j) *
                        x.row(j).dot((boost_.gain.row(j).array().square() - 1.0).matrix().cwiseProduct(
                            c_.row(j).cwiseAbs2()));
            }
        }
        ev.input_power = I;
        ev.energy.resize(J_);
        slope_.resize(J_);
        for (int j = 0; j < J_; ++j) {
            ev.energy(j) = harvested_energy(I(j), prob_.rect[j], sys.delta_d, prob_.eh_model);
            slope_(j) = harvested_energy_slope(I(j), prob_.rect[j], sys.delta_d, prob_.eh_model);
        }
        ev.uplink_power = ev.energy / sys.delta_u;
        const Eigen::VectorXd& P = ev.uplink_power;
        denom_.resize(J_);
        ev.sinr.resize(J_);
        ev.se.resize(J_);
        for (int j = 0; j < J_; ++j) {
            denom_(j) = st_.uplink_second.row(j).dot(P) - P(j) * st_.uplink_second(j, j) +
                        P(j) * variance_(j) + sys.sigma2 * st_.combiner_power(j);
            if (!(denom_(j) > 0) || !std::isfinite(denom_(j)))
                throw NumericalError("non-positive SINR denominator for user " + std::to_string(j));
            ev.sinr(j) = P(j) * amp_(j) * amp_(j) / denom_(j);
            ev.se(j) = spectral_efficiency(ev.sinr(j), sys);
        }
        ev.min_se = ev.se.minCoeff();
    }

    /// d SE_j / d x, valid after state(x, ev).
    Eigen::MatrixXd gradient(int j, const Eigen::MatrixXd& x, const Evaluation& ev) const {
        const auto& sys = prob_.sys;
        const Eigen::VectorXd& P = ev.uplink_power;
        const double a = amp_(j) * amp_(j);
        const double D = denom_(j);
        const double dse = double(sys.delta_u) / sys.delta_c / ((1.0 + ev.sinr(j)) * std::numbers::ln2);

        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(J_, U_);
        for (int m = 0; m < J_; ++m) {
            double ds_dp;
            if (m == j)
                ds_dp = a * (D - P(j) * variance_(j)) / (D * D);
            else
                ds_dp = -P(j) * a * st_.uplink_second(j, m) / (D * D);
            const double w = dse * ds_dp * slope_(m) / sys.delta_u;
            if (w == 0) continue;
            add_input_gradient(m, x, w, g);
        }
        return g;
    }

private:
    std::size_t idx(int j, int k) const { return static_cast<std::size_t>(j) * J_ + k; }

    // g += w * d I_m / d x
    void add_input_gradient(int m, const Eigen::MatrixXd& x, double w, Eigen::MatrixXd& g) const {
        if (coherent_) {
            for (int k = 0; k < J_; ++k) g.row(k) += 2 * w * Y_[idx(m, k)].transpose();
            const Eigen::RowVectorXd gc = boost_.gain.row(m).cwiseProduct(c_.row(m));
            const double boosted = x.row(m).dot(gc);
            const double base = x.row(m).dot(c_.row(m));
            g.row(m) += 2 * w * boost_.share(m) * (boosted * gc - base * c_.row(m));
        } else {
            for (int k = 0; k < J_; ++k) g.row(k) += w * S_[idx(m, k)].diagonal().transpose();
            g.row(m) += w * boost_.share(m) *
                        (boost_.gain.row(m).array().square() - 1.0).matrix().cwiseProduct(c_.row(m).cwiseAbs2());
        }
    }

    const MMFProblem& prob_;
    const StatTerms& st_;
    int J_ = 0;
    int U_ = 0;
    bool coherent_ = true;
    std::vector<Eigen::MatrixXd> S_;
    RisBoost boost_;
    Eigen::MatrixXd c_;
    Eigen::VectorXd amp_;
    Eigen::VectorXd variance_;

    std::vector<Eigen::VectorXd> Y_;
    Eigen::VectorXd slope_;
    Eigen::VectorXd denom_;
};

MMFSolution make_solution(const MMFProblem& prob, const PowerCoefficients& p) {
    MMFSolution sol;
    sol.p = p;
    const Evaluation ev = evaluate(prob, p);
    sol.min_se = ev.min_se;
    sol.per_user_se = ev.se;
    sol.per_user_energy = ev.energy;
    sol.per_user_input = ev.input_power;
    const Eigen::VectorXd ap_power = p.colwise().sum().transpose();
    sol.feasible = std::isfinite(sol.min_se) && sol.min_se > 0 &&
                   (ap_power.array() <= prob.sys.rho_d + kPowerSlack).all();
    return sol;
}

}  // namespace

Evaluation evaluate(const MMFProblem& prob, const PowerCoefficients& p) {
    Kernel k(prob);
    Evaluation ev;
    k.state(k.from_power(p), ev);
    return ev;
}

MMFSolution equal_power_baseline(const MMFProblem& prob) {
    const PowerCoefficients p =
        PowerCoefficients::Constant(prob.st.users, prob.st.aps, prob.sys.rho_d / prob.st.users);
    return make_solution(prob, p);
}

double se_upper_bound(const MMFProblem& prob) {
    // With all of an AP's budget behind one user, I_j <= rho_d (sum_u max_m s_jmu)^2
    // (coherent, s = sqrt of the diagonal) or rho_d sum_u max_m d_jmu; the
    // reflected term is bounded the same way. Interference is dropped.
    const StatTerms& st = prob.st;
    const RisBoost boost = prob.ris_boost ? *prob.ris_boost : no_boost(st.users, st.aps);
    const auto& sys = prob.sys;
    const Eigen::VectorXd amp = boosted_uplink_amplitude(st, boost);
    double bound = std::numeric_limits<double>::infinity();
    for (int j = 0; j < st.users; ++j) {
        double sum_amp = 0;
        double sum_pow = 0;
        for (int u = 0; u < st.aps; ++u) {
            double best = 0;
            for (int m = 0; m < st.users; ++m) {
                double d = st.noncoherent(j, m, u);
                if (m == j) {
                    const double c2 = std::norm(st.desired_mean(j, u));
                    d += boost.share(j) * (boost.gain(j, u) * boost.gain(j, u) - 1.0) * c2;
                }
                best = std::max(best, d);
            }
            sum_amp += std::sqrt(best);
            sum_pow += best;
        }
        const double I = prob.mode == TransmissionMode::Coherent ? sys.rho_d * sum_amp * sum_amp
                                                                 : sys.rho_d * sum_pow;
        const double E = harvested_energy(I, prob.rect[j], sys.delta_d, prob.eh_model);
        const double P = uplink_power_from_energy(E, sys.delta_u);
        const double var = std::max(0.0, st.uplink_second(j, j) - std::norm(st.uplink_mean(j)));
        const double sinr = P * amp(j) * amp(j) / (P * var + sys.sigma2 * st.combiner_power(j));
        bound = std::min(bound, spectral_efficiency(sinr, sys));
    }
    return bound;
}

AscentResult feasibility_ascent(const MMFProblem& prob, const PowerCoefficients& warm, double target) {
    Kernel k(prob);
    const SolverOptions& opt = prob.options;
    Eigen::MatrixXd x = k.from_power(warm);
    k.project(x);

    AscentResult best;
    Evaluation ev;
    for (int it = 1; it <= opt.max_iters; ++it) {
        k.state(x, ev);
        if (it == 1 || ev.min_se > best.min_se) {
            best.min_se = ev.min_se;
            best.p = k.to_power(x);
        }
        best.iterations = it;
        if (ev.min_se >= target) {
            best.reached = true;
            break;
        }

        Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(k.users(), k.aps());
        const double cutoff = ev.min_se * (1.0 + opt.active_tol);
        for (int j = 0; j < k.users(); ++j) {
            if (ev.se(j) > cutoff) continue;
            const Eigen::MatrixXd g = k.gradient(j, x, ev);
            const double n = g.norm();
            if (n > 0 && std::isfinite(n)) dir += g / n;
        }
        const double n = dir.norm();
        if (!(n > 0) || !std::isfinite(n)) break;
        x += (opt.step0 * k.scale() / std::sqrt(static_cast<double>(it)) / n) * dir;
        k.project(x);
    }
    return best;
}

MMFSolution mmf_solve(const MMFProblem& prob) {
    const SolverOptions& opt = prob.options;
    MMFSolution base = equal_power_baseline(prob);
    PowerCoefficients best = base.p;
    double lo = base.min_se;
    double hi = std::max(se_upper_bound(prob) * (1.0 + 1e-9), lo);
    int iterations = 0;
    std::vector<TraceRow> trace;

    for (int round = 0; round < opt.bisection_rounds; ++round) {
        if (hi - lo <= opt.rel_tol * hi) break;
        const double t = 0.5 * (lo + hi);
        const AscentResult res = feasibility_ascent(prob, best, t);
        iterations += res.iterations;
        if (res.min_se > lo) {
            lo = res.min_se;
            best = res.p;
        }
        if (!res.reached) hi = t;
        trace.push_back({iterations, t, lo});
    }

    MMFSolution sol = make_solution(prob, best);
    sol.iterations = iterations;
    sol.trace = std::move(trace);
    return sol;
}

}  // namespace cure
