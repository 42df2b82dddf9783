#include "cure/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cure {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string layout_csv(const NetworkLayout& layout) {
    std::ostringstream out;
    out << "kind,index,x_m,y_m,z_m\n";
    auto rows = [&](const char* kind, const std::vector<Position>& pts) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            out << kind << ',' << i << ',' << format_number(pts[i].x()) << ',' << format_number(pts[i].y())
                << ',' << format_number(pts[i].z()) << '\n';
    };
    rows("ap", layout.aps);
    rows("ris", layout.ris);
    rows("user", layout.users);
    return out.str();
}

std::string per_user_se_csv(const CampaignResult& result) {
    std::ostringstream out;
    out << "setup,user,se_bits_per_hz\n";
    for (const auto& s : result.setups) {
        if (!s.feasible) continue;
        for (Eigen::Index j = 0; j < s.per_user_se.size(); ++j)
            out << s.setup_index << ',' << j << ',' << format_number(s.per_user_se(j)) << '\n';
    }
    return out.str();
}

std::string harvested_csv(const CampaignResult& result) {
    std::ostringstream out;
    out << "setup,user,input_power_w,harvested_sample_w\n";
    for (const auto& s : result.setups) {
        if (!s.feasible) continue;
        for (Eigen::Index j = 0; j < s.per_user_energy.size(); ++j)
            out << s.setup_index << ',' << j << ',' << format_number(s.per_user_input(j)) << ','
                << format_number(s.per_user_energy(j)) << '\n';
    }
    return out.str();
}

std::string cdf_csv(const std::vector<CdfPoint>& cdf) {
    std::ostringstream out;
    out << "value,cdf\n";
    for (const auto& p : cdf) out << format_number(p.value) << ',' << format_number(p.probability) << '\n';
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "axis,value,mean_energy,mean_min_se\n";
    for (const auto& r : rows)
        out << r.axis << ',' << r.value << ',' << format_number(r.mean_energy) << ','
            << format_number(r.mean_min_se) << '\n';
    return out.str();
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::ostringstream out;
    out << "iteration,t,min_se\n";
    for (const auto& r : trace)
        out << r.iteration << ',' << format_number(r.target) << ',' << format_number(r.min_se) << '\n';
    return out.str();
}

std::string panels_csv(const std::vector<RISPanel>& panels, const std::vector<int>& panel_index) {
    std::ostringstream out;
    out << "ris,element,theta_rad\n";
    for (std::size_t i = 0; i < panels.size(); ++i)
        for (Eigen::Index n = 0; n < panels[i].theta.size(); ++n)
            out << panel_index.at(i) << ',' << n << ',' << format_number(panels[i].theta(n)) << '\n';
    return out.str();
}

std::string run_meta_json(const RunMeta& meta, const CampaignResult* result) {
    nlohmann::ordered_json j;
    j["command"] = meta.command;
    j["scenario"] = serialize_scenario(meta.spec);
    j["seed"] = meta.spec.seed;
    j["setups"] = meta.spec.setups;
    j["workers"] = meta.workers;
    j["solver"] = {{"method", "bisection + projected subgradient ascent"},
                   {"max_iters", meta.solver.max_iters},
                   {"bisection_rounds", meta.solver.bisection_rounds},
                   {"rel_tol", meta.solver.rel_tol},
                   {"step0", meta.solver.step0},
                   {"active_tol", meta.solver.active_tol},
                   {"max_retries", kMaxRetries},
                   {"retry_seed_offset", kRetrySeedOffset}};
    if (result) {
        nlohmann::ordered_json retries = nlohmann::ordered_json::array();
        for (const auto& s : result->setups) retries.push_back(s.retries);
        j["retries"] = retries;
        j["total_retries"] = result->total_retries;
        j["infeasible_setups"] = result->infeasible;
        j["summary"] = {{"mean_se", result->mean_se},
                        {"median_se", result->median_se},
                        {"mean_energy", result->mean_energy},
                        {"median_energy", result->median_energy},
                        {"mean_min_se", result->mean_min_se}};
    }
    j["wall_seconds"] = meta.wall_seconds;
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw Error("write failed: " + path.string());
}

void emit_outputs(const CampaignResult& result, const RunMeta& meta, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
    write_text(dir / "per_user_se.csv", per_user_se_csv(result));
    write_text(dir / "harvested.csv", harvested_csv(result));
    write_text(dir / "cdf_se.csv", cdf_csv(result.cdf_se));
    write_text(dir / "cdf_energy.csv", cdf_csv(result.cdf_energy));
    write_text(dir / "run_meta.json", run_meta_json(meta, &result));
}

void emit_sweep(const std::vector<SweepRow>& rows, const RunMeta& meta, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
    write_text(dir / "sweep.csv", sweep_csv(rows));
    write_text(dir / "run_meta.json", run_meta_json(meta, nullptr));
}

}  // namespace cure
