#include "cure/sim.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace cure {

std::mt19937_64 make_stream(long long seed, Stream stream) {
    const auto s = static_cast<std::uint64_t>(seed);
    std::seed_seq seq{static_cast<std::uint32_t>(s & 0xffffffffu), static_cast<std::uint32_t>(s >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

namespace {

bool ris_active(const ScenarioSpec& spec) { return spec.ris_count > 0 && spec.ris_elements > 0; }

}  // namespace

SetupResult run_setup(const ScenarioSpec& spec, int setup_index, SetupDebug* debug,
                      const SolverOptions& options) {
    SetupResult out;
    out.setup_index = setup_index;
    out.ris_enabled = ris_active(spec);

    for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        const long long seed = spec.seed + setup_index + attempt * kRetrySeedOffset;
        auto users_rng = make_stream(seed, Stream::Users);
        auto shadow_rng = make_stream(seed, Stream::Shadowing);
        auto fading_rng = make_stream(seed, Stream::Fading);
        auto pilot_rng = make_stream(seed, Stream::PilotNoise);

        NetworkLayout layout = make_layout(spec, users_rng);
        LargeScaleParams ls = large_scale(layout, spec.system, spec.antennas, shadow_rng);
        ChannelEnsemble ens = draw_channels(ls, spec.mc_realizations, fading_rng);
        const ChannelEstimates est = lmmse_estimate(ens, ls, spec.system, pilot_rng);
        const PrecodingVectors w = mrt_precoders(est, spec.ap_count, spec.antennas);

        MMFProblem prob = make_problem(stat_terms(ens, w), spec.system, spec.rectifier, spec.mode, spec.eh_model);
        prob.options = options;
        const MMFSolution sol = mmf_solve(prob);
        out.retries = attempt;
        out.solver_iterations = sol.iterations;
        if (!sol.feasible) continue;

        Evaluation ev = evaluate(prob, sol.p);
        RisBoost boost;
        if (out.ris_enabled) {
            boost = make_ris_boost(layout, ls, spec.ris_elements, spec.ris_alpha, spec.system);
            prob.ris_boost = boost;
            ev = evaluate(prob, sol.p);
        }
        out.per_user_se = ev.se;
        out.per_user_energy = ev.energy;
        out.per_user_input = ev.input_power;
        out.per_ap_power = ap_transmit_power(sol.p, w);
        out.min_se = ev.min_se;
        out.feasible = true;

        if (debug) {
            debug->trace = sol.trace;
            if (out.ris_enabled)
                debug->panels = configure_panels(layout, ls, boost, spec.ris_elements, spec.ris_alpha,
                                                 spec.system, &debug->panel_index);
            debug->layout = std::move(layout);
            debug->large_scale = std::move(ls);
            debug->ensemble = std::move(ens);
        }
        return out;
    }
    out.feasible = false;
    return out;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> values) {
    if (values.empty()) throw ValidationError("empirical CDF of an empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    std::vector<CdfPoint> out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k + 1 < values.size() && values[k + 1] == values[k]) continue;
        out.push_back({values[k], static_cast<double>(k + 1) / n});
    }
    return out;
}

double cdf_at(const std::vector<CdfPoint>& cdf, double x) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), x,
                               [](double v, const CdfPoint& p) { return v < p.value; });
    return it == cdf.begin() ? 0.0 : std::prev(it)->probability;
}

namespace {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

CampaignResult aggregate(std::vector<SetupResult> setups) {
    std::sort(setups.begin(), setups.end(),
              [](const SetupResult& a, const SetupResult& b) { return a.setup_index < b.setup_index; });
    CampaignResult res;
    std::vector<double> se;
    std::vector<double> energy;
    std::vector<double> min_se;
    for (const auto& s : setups) {
        res.total_retries += s.retries;
        if (!s.feasible) {
            ++res.infeasible;
            continue;
        }
        se.insert(se.end(), s.per_user_se.begin(), s.per_user_se.end());
        energy.insert(energy.end(), s.per_user_energy.begin(), s.per_user_energy.end());
        min_se.push_back(s.min_se);
    }
    if (!se.empty()) {
        res.cdf_se = empirical_cdf(se);
        res.cdf_energy = empirical_cdf(energy);
    }
    res.mean_se = mean_of(se);
    res.median_se = median_of(se);
    res.mean_energy = mean_of(energy);
    res.median_energy = median_of(energy);
    res.mean_min_se = mean_of(min_se);
    res.setups = std::move(setups);
    return res;
}

CampaignResult run_campaign(const ScenarioSpec& spec, int workers, const SolverOptions& options) {
    validate(spec);
    const int n = spec.setups;
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, n);

    std::vector<SetupResult> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                results[i] = run_setup(spec, i, nullptr, options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return aggregate(std::move(results));
}

SweepAxis parse_axis(const std::string& s) {
    if (s == "ris_elements") return SweepAxis::RisElements;
    if (s == "ap_antennas") return SweepAxis::ApAntennas;
    if (s == "ris_count") return SweepAxis::RisCount;
    if (s == "ap_count") return SweepAxis::ApCount;
    if (s == "strategy") return SweepAxis::Strategy;
    throw ValidationError("unknown sweep axis '" + s + "'");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::RisElements: return "ris_elements";
        case SweepAxis::ApAntennas: return "ap_antennas";
        case SweepAxis::RisCount: return "ris_count";
        case SweepAxis::ApCount: return "ap_count";
        case SweepAxis::Strategy: return "strategy";
    }
    return "";
}

ScenarioSpec apply_axis(const ScenarioSpec& spec, SweepAxis axis, const std::string& value) {
    ScenarioSpec out = spec;
    auto as_int = [&](const std::string& v) {
        std::size_t pos = 0;
        int x = 0;
        try {
            x = std::stoi(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != v.size())
            throw ValidationError("invalid value '" + v + "' for axis " + to_string(axis));
        return x;
    };
    switch (axis) {
        case SweepAxis::RisElements: out.ris_elements = as_int(value); break;
        case SweepAxis::ApAntennas: out.antennas = as_int(value); break;
        case SweepAxis::RisCount: out.ris_count = as_int(value); break;
        case SweepAxis::ApCount: out.ap_count = as_int(value); break;
        case SweepAxis::Strategy: out.strategy = parse_strategy(value); break;
    }
    derive_system(out);
    validate(out);
    return out;
}

std::vector<SweepRow> sweep(const ScenarioSpec& spec, SweepAxis axis, const std::vector<std::string>& values,
                            int workers, const SolverOptions& options) {
    if (values.empty()) throw ValidationError("sweep needs at least one value");
    std::vector<ScenarioSpec> specs;
    for (const auto& v : values) specs.push_back(apply_axis(spec, axis, v));
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const CampaignResult res = run_campaign(specs[i], workers, options);
        rows.push_back({to_string(axis), values[i], res.mean_energy, res.mean_min_se});
    }
    return rows;
}

}  // namespace cure
