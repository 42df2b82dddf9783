#include "cure/ris.hpp"

#include <numbers>
#include <set>

namespace cure {

namespace {

double wrap_phase(double x) {
    constexpr double two_pi = 2 * std::numbers::pi;
    double y = std::fmod(x, two_pi);
    if (y < 0) y += two_pi;
    if (y >= two_pi) y = 0;
    return y;
}

double hop_gain(const Position& a, const Position& b) {
    return db_to_linear(path_loss_db(distance_3d(a, b)));
}

}  // namespace

CascadedChannel make_cascaded(Eigen::VectorXcd h_ur, Eigen::VectorXcd h_jr, double beta_ur,
                              double beta_jr) {
    CascadedChannel cc;
    cc.beta_ris = cascaded_gain(h_ur, h_jr);
    cc.h_ur = std::move(h_ur);
    cc.h_jr = std::move(h_jr);
    cc.beta_ur = beta_ur;
    cc.beta_jr = beta_jr;
    return cc;
}

std::vector<Position> element_positions(const Position& centre, int n_elements, double wavelength) {
    std::vector<Position> out;
    out.reserve(n_elements);
    const double spacing = wavelength / 2;
    for (int n = 0; n < n_elements; ++n) {
        Position p = centre;
        p.x() += (n - (n_elements - 1) / 2.0) * spacing;
        out.push_back(p);
    }
    return out;
}

CascadedChannel cascaded_channels(const NetworkLayout& layout, int ris_index, int ap, int user,
                                  int n_elements, const SystemParams& sys) {
    const Position& panel = layout.ris.at(ris_index);
    const Position& a = layout.aps.at(ap);
    const Position& j = layout.users.at(user);
    const double lambda = sys.wavelength();
    const double beta_ur = hop_gain(a, panel);
    const double beta_jr = hop_gain(j, panel);
    const auto elements = element_positions(panel, n_elements, lambda);

    Eigen::VectorXcd h_ur(n_elements);
    Eigen::VectorXcd h_jr(n_elements);
    for (int n = 0; n < n_elements; ++n) {
        h_ur(n) = std::polar(std::sqrt(beta_ur), -2 * std::numbers::pi * distance_3d(a, elements[n]) / lambda);
        h_jr(n) = std::polar(std::sqrt(beta_jr), -2 * std::numbers::pi * distance_3d(j, elements[n]) / lambda);
    }
    return make_cascaded(std::move(h_ur), std::move(h_jr), beta_ur, beta_jr);
}

Eigen::VectorXd optimal_phases(cdouble h_direct, const CascadedChannel& cc) {
    const double ref = std::arg(h_direct);
    Eigen::VectorXd theta(cc.h_ur.size());
    for (Eigen::Index n = 0; n < theta.size(); ++n) {
        const cdouble prod = cc.h_ur(n) * cc.h_jr(n);
        theta(n) = wrap_phase(prod == cdouble(0) ? ref : ref - std::arg(prod));
    }
    return theta;
}

cdouble received_amplitude(cdouble h_direct, const RISPanel& panel, const CascadedChannel& cc) {
    if (panel.theta.size() != cc.h_ur.size() || cc.h_jr.size() != cc.h_ur.size())
        throw ValidationError("panel and cascaded channel sizes differ");
    cdouble sum = 0;
    for (Eigen::Index n = 0; n < panel.theta.size(); ++n)
        sum += std::polar(1.0, panel.theta(n)) * cc.h_ur(n) * cc.h_jr(n);
    return h_direct + panel.alpha * sum;
}

int assign_ris(const NetworkLayout& layout, int ap, int user, int n_elements, const SystemParams& sys) {
    int best = -1;
    double best_gain = -1;
    for (int r = 0; r < static_cast<int>(layout.ris.size()); ++r) {
        // beta_ris = beta_ur beta_jr for unit-modulus element responses.
        const double g = n_elements > 0
                             ? cascaded_channels(layout, r, ap, user, n_elements, sys).beta_ris
                             : hop_gain(layout.aps[ap], layout.ris[r]) * hop_gain(layout.users[user], layout.ris[r]);
        if (g > best_gain) {
            best_gain = g;
            best = r;
        }
    }
    return best;
}

RisBoost no_boost(int users, int aps) {
    RisBoost b;
    b.gain = Eigen::MatrixXd::Ones(users, aps);
    b.share = Eigen::VectorXd::Zero(users);
    b.assignment = Eigen::MatrixXi::Constant(users, aps, -1);
    return b;
}

RisBoost make_ris_boost(const NetworkLayout& layout, const LargeScaleParams& ls, int n_elements,
                        double alpha, const SystemParams& sys) {
    const int J = ls.users;
    const int U = ls.aps;
    RisBoost b = no_boost(J, U);
    if (layout.ris.empty() || n_elements == 0) return b;

    std::vector<std::set<int>> served(layout.ris.size());
    for (int j = 0; j < J; ++j)
        for (int u = 0; u < U; ++u) {
            const int r = assign_ris(layout, u, j, n_elements, sys);
            b.assignment(j, u) = r;
            served[r].insert(j);
            const double beta_ris = cascaded_channels(layout, r, u, j, n_elements, sys).beta_ris;
            b.gain(j, u) = 1.0 + n_elements * alpha * std::sqrt(beta_ris) / std::sqrt(ls.beta(j, u));
        }
    for (int j = 0; j < J; ++j) {
        std::size_t busiest = 1;
        for (int u = 0; u < U; ++u) busiest = std::max(busiest, served[b.assignment(j, u)].size());
        b.share(j) = 1.0 / static_cast<double>(busiest);
    }
    return b;
}

Eigen::VectorXd boost_increment(const StatTerms& st, const PowerCoefficients& p,
                                TransmissionMode mode, const RisBoost& boost) {
    Eigen::VectorXd extra = Eigen::VectorXd::Zero(st.users);
    for (int j = 0; j < st.users; ++j) {
        const Eigen::VectorXd c = st.desired_mean.row(j).cwiseAbs().transpose();
        const Eigen::VectorXd g = boost.gain.row(j).transpose();
        if (mode == TransmissionMode::Coherent) {
            const Eigen::VectorXd q = p.row(j).cwiseSqrt().transpose();
            const double boosted = q.dot(g.cwiseProduct(c));
            const double base = q.dot(c);
            extra(j) = boost.share(j) * (boosted * boosted - base * base);
        } else {
            extra(j) = boost.share(j) *
                       p.row(j).dot((g.array().square() - 1.0).matrix().cwiseProduct(c.cwiseAbs2()));
        }
    }
    return extra;
}

Eigen::VectorXd boost_input_power(const Eigen::VectorXd& base, const StatTerms& st,
                                  const PowerCoefficients& p, TransmissionMode mode,
                                  const RisBoost& boost) {
    return base + boost_increment(st, p, mode, boost);
}

Eigen::VectorXd boosted_uplink_amplitude(const StatTerms& st, const RisBoost& boost) {
    Eigen::VectorXd amp(st.users);
    for (int j = 0; j < st.users; ++j) {
        const double extra =
            (boost.gain.row(j).array() - 1.0).matrix().dot(st.desired_mean.row(j).cwiseAbs());
        amp(j) = std::abs(st.uplink_mean(j)) + boost.share(j) * extra;
    }
    return amp;
}

std::vector<RISPanel> configure_panels(const NetworkLayout& layout, const LargeScaleParams& ls,
                                       const RisBoost& boost, int n_elements, double alpha,
                                       const SystemParams& sys, std::vector<int>* panel_index) {
    std::vector<RISPanel> out;
    if (panel_index) panel_index->clear();
    for (int r = 0; r < static_cast<int>(layout.ris.size()); ++r) {
        for (int j = 0; j < ls.users; ++j) {
            int best_u = -1;
            for (int u = 0; u < ls.aps; ++u)
                if (boost.assignment(j, u) == r && (best_u < 0 || ls.beta(j, u) > ls.beta(j, best_u)))
                    best_u = u;
            if (best_u < 0) continue;
            const auto cc = cascaded_channels(layout, r, best_u, j, n_elements, sys);
            RISPanel panel;
            panel.n_elements = n_elements;
            panel.alpha = alpha;
            panel.position = layout.ris[r];
            panel.theta = optimal_phases(cdouble(std::sqrt(ls.beta(j, best_u)), 0.0), cc);
            out.push_back(std::move(panel));
            if (panel_index) panel_index->push_back(r);
        }
    }
    return out;
}

}  // namespace cure
