#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cure/config.hpp"
#include "cure/geometry.hpp"
#include "cure/powerctl.hpp"
#include "cure/ris.hpp"
#include "cure/sim.hpp"

namespace cure {

/// Shortest text that round-trips a double (17 significant digits).
std::string format_number(double v);

std::string layout_csv(const NetworkLayout& layout);
std::string per_user_se_csv(const CampaignResult& result);
std::string harvested_csv(const CampaignResult& result);
std::string cdf_csv(const std::vector<CdfPoint>& cdf);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string trace_csv(const std::vector<TraceRow>& trace);
std::string panels_csv(const std::vector<RISPanel>& panels, const std::vector<int>& panel_index);

/// Everything needed to reproduce a run plus timing; not part of the
/// byte-identical outputs.
struct RunMeta {
    ScenarioSpec spec;
    SolverOptions solver;
    int workers = 0;
    double wall_seconds = 0;
    std::string command = "run";
};

std::string run_meta_json(const RunMeta& meta, const CampaignResult* result);

void write_text(const std::filesystem::path& path, const std::string& text);

/// per_user_se.csv, harvested.csv, cdf_se.csv, cdf_energy.csv, run_meta.json.
void emit_outputs(const CampaignResult& result, const RunMeta& meta, const std::filesystem::path& dir);

/// sweep.csv and run_meta.json.
void emit_sweep(const std::vector<SweepRow>& rows, const RunMeta& meta, const std::filesystem::path& dir);

}  // namespace cure
