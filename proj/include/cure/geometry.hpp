#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cure/config.hpp"

namespace cure {

using Position = Eigen::Vector3d;

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar distance_3d(const Eigen::MatrixBase<DerivedA>& a,
                                      const Eigen::MatrixBase<DerivedB>& b) {
    return (a - b).norm();
}

struct NetworkLayout {
    double coverage_side = 0;
    std::vector<Position> aps;
    std::vector<Position> ris;
    std::vector<Position> users;
};

/// sqrt(U) x sqrt(U) grid of APs at height h with spacing side/sqrt(U),
/// first AP at (side/(2 sqrt(U)), side/(2 sqrt(U))).
std::vector<Position> grid_aps(int ap_count, double side, double h);

/// Interior corners of the AP grid cells, row-major. (sqrt(U)-1)^2 slots.
std::vector<Position> central_slots(int ap_count, double side, double h);

/// RIS placement for the three deployment strategies.
///  - Edge: equally spaced along the perimeter, counter-clockwise from the
///    midpoint of the south edge.
///  - Central: first R central slots.
///  - Hybrid: ceil(R/2) edge panels followed by the rest on central slots.
std::vector<Position> place_ris(DeploymentStrategy strategy, int ris_count, int ap_count,
                                double side, double h);

std::vector<Position> place_users(int user_count, double side, double h, std::mt19937_64& rng);

/// APs and RIS panels from the scenario, users drawn from `rng`.
NetworkLayout make_layout(const ScenarioSpec& spec, std::mt19937_64& rng);

}  // namespace cure
