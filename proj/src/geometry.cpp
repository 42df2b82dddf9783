#include "cure/geometry.hpp"

#include <cmath>

namespace cure {

namespace {

int grid_side(int ap_count) {
    if (ap_count < 1) throw ValidationError("ap_count must be >= 1");
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(ap_count))));
    if (k * k != ap_count) throw ValidationError("ap_count must be a perfect square");
    return k;
}

Position perimeter_point(double arc, double side) {
    // Arc length measured counter-clockwise from (side/2, 0).
    double s = std::fmod(arc + side / 2, 4 * side);
    if (s < side) return {s, 0, 0};
    s -= side;
    if (s < side) return {side, s, 0};
    s -= side;
    if (s < side) return {side - s, side, 0};
    s -= side;
    return {0, side - s, 0};
}

std::vector<Position> edge_ris(int count, double side, double h) {
    std::vector<Position> out;
    out.reserve(count);
    const double spacing = 4 * side / count;
    for (int r = 0; r < count; ++r) {
        Position p = perimeter_point(r * spacing, side);
        p.z() = h;
        out.push_back(p);
    }
    return out;
}

std::vector<Position> central_ris(int count, int ap_count, double side, double h) {
    auto slots = central_slots(ap_count, side, h);
    if (count > static_cast<int>(slots.size()))
        throw ValidationError("requested " + std::to_string(count) + " central RIS panels but only " +
                              std::to_string(slots.size()) + " slots exist");
    slots.resize(count);
    return slots;
}

}  // namespace

std::vector<Position> grid_aps(int ap_count, double side, double h) {
    const int k = grid_side(ap_count);
    const double spacing = side / k;
    std::vector<Position> out;
    out.reserve(ap_count);
    for (int row = 0; row < k; ++row)
        for (int col = 0; col < k; ++col)
            out.emplace_back(spacing / 2 + col * spacing, spacing / 2 + row * spacing, h);
    return out;
}

std::vector<Position> central_slots(int ap_count, double side, double h) {
    const int k = grid_side(ap_count);
    const double spacing = side / k;
    std::vector<Position> out;
    for (int row = 1; row < k; ++row)
        for (int col = 1; col < k; ++col) out.emplace_back(col * spacing, row * spacing, h);
    return out;
}

std::vector<Position> place_ris(DeploymentStrategy strategy, int ris_count, int ap_count,
                                double side, double h) {
    if (ris_count < 0) throw ValidationError("ris_count must be >= 0");
    if (ris_count == 0) return {};
    switch (strategy) {
        case DeploymentStrategy::Edge:
            return edge_ris(ris_count, side, h);
        case DeploymentStrategy::Central:
            return central_ris(ris_count, ap_count, side, h);
        case DeploymentStrategy::Hybrid: {
            const int on_edge = (ris_count + 1) / 2;
            auto out = edge_ris(on_edge, side, h);
            auto inner = central_ris(ris_count - on_edge, ap_count, side, h);
            out.insert(out.end(), inner.begin(), inner.end());
            return out;
        }
    }
    return {};
}

std::vector<Position> place_users(int user_count, double side, double h, std::mt19937_64& rng) {
    if (user_count < 1) throw ValidationError("user_count must be >= 1");
    std::uniform_real_distribution<double> coord(0.0, side);
    std::vector<Position> out;
    out.reserve(user_count);
    for (int j = 0; j < user_count; ++j) {
        const double x = coord(rng);
        const double y = coord(rng);
        out.emplace_back(x, y, h);
    }
    return out;
}

NetworkLayout make_layout(const ScenarioSpec& spec, std::mt19937_64& rng) {
    NetworkLayout layout;
    layout.coverage_side = spec.coverage_m;
    layout.aps = grid_aps(spec.ap_count, spec.coverage_m, spec.ap_height_m);
    layout.ris = place_ris(spec.strategy, spec.ris_count, spec.ap_count, spec.coverage_m,
                           spec.ris_height_m);
    layout.users = place_users(spec.user_count, spec.coverage_m, spec.user_height_m, rng);
    return layout;
}

}  // namespace cure
