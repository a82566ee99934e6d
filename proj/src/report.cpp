#include "collabline/report.hpp"

#include <algorithm>

#include "collabline/ingest.hpp"
#include "collabline/par.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace collabline {

void write_series_csv(const fs::path& path, const std::vector<const SeriesResult*>& series) {
    std::string out = "bin,mean,se,n,label\n";
    for (const SeriesResult* s : series) {
        for (const BinStat& b : s->binned.visible()) {
            out += fmt_num(b.label);
            out += ',';
            out += fmt_num(b.mean);
            out += ',';
            out += fmt_num(b.se);
            out += ',';
            out += std::to_string(b.n);
            out += ',';
            out += s->label;
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

void write_tests_csv(const fs::path& path, const std::vector<TestPoint>& tests) {
    std::string out = "bin,u,z,p,n1,n2\n";
    for (const TestPoint& t : tests) {
        out += fmt_num(t.bin);
        out += ',';
        out += fmt_num(t.test.u_statistic);
        out += ',';
        out += fmt_num(t.test.z);
        out += ',';
        out += fmt_num(t.test.p_one_sided);
        out += ',';
        out += std::to_string(t.test.n1);
        out += ',';
        out += std::to_string(t.test.n2);
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_rho_csv(const fs::path& path,
                   const std::vector<std::pair<std::string, const RhoSeries*>>& series) {
    std::string out = "r,rho,n_switch,n_stay,label\n";
    for (const auto& [label, rho] : series) {
        for (const RhoPoint& p : rho->points) {
            out += std::to_string(p.r);
            out += ',';
            out += fmt_num(p.rho);
            out += ',';
            out += std::to_string(p.n_switch);
            out += ',';
            out += std::to_string(p.n_stay);
            out += ',';
            out += label;
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

void write_ccdf_csv(const fs::path& path, const std::vector<const CcdfSeries*>& series) {
    std::string out = "value,ccdf,series_label\n";
    for (const CcdfSeries* s : series) {
        for (const auto& [v, p] : s->points) {
            out += fmt_num(v);
            out += ',';
            out += fmt_num(p);
            out += ',';
            out += s->label;
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

std::string lognormal_fit_json(const std::vector<std::pair<std::string, LogNormalFit>>& fits) {
    json j = json::object();
    for (const auto& [label, fit] : fits) {
        j[label] = {{"mu", fit.mu},
                    {"sigma", fit.sigma},
                    {"n", fit.n},
                    {"excluded_zeros", fit.excluded_nonpositive},
                    {"degenerate", fit.degenerate}};
    }
    return j.dump(2) + "\n";
}

void write_run_manifest(const fs::path& dir, const std::string& command_line,
                        const std::string& version, uint64_t config_hash,
                        const std::vector<std::pair<std::string, std::string>>& input_digests,
                        double wall_seconds) {
    json outputs = json::object();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) outputs[f.filename().string()] = hex64(digest_file(f));

    json inputs = json::object();
    for (const auto& [name, digest] : input_digests) inputs[name] = digest;

    json mf{{"command_line", command_line},
            {"config_hash", hex64(config_hash)},
            {"inputs", inputs},
            {"version", version},
            {"wall_seconds", wall_seconds},
            {"outputs", outputs}};
    write_file_atomic(dir / "manifest.json", mf.dump(2) + "\n");
}

void run_report(const fs::path& workspace, const AnalysisConfig& cfg_in,
                std::span<const double> sweep_thresholds, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    Dataset ds = load_workspace(workspace);
    ImpactTable impact;
    if (auto existing = load_impact(workspace, ds.n_patents())) {
        impact = std::move(*existing);
    } else {
        impact = compute_impact(ds);
        save_impact(impact, workspace);
    }

    TeamSequences teams = build_team_sequences(ds);
    PairSequences pairs = build_pair_sequences(ds);

    AnalysisConfig cfg = cfg_in;
    if (ds.n_patents() > 0) {
        cfg.bound_cutoff =
            bind_hit_threshold(cfg.hit, hit_population(teams, ds, impact.impact, cfg));
        record_cutoff(workspace, cfg.hit.label(), cfg.bound_cutoff);
    }

    // Distribution figures: team size and impact CCDFs, whole range and
    // split halves, with log-normal fits.
    std::vector<double> sizes, size_years, impacts, impact_years;
    std::vector<int32_t> yrs;
    sizes.reserve(ds.n_patents());
    for (PatentIdx p = 0; p < ds.n_patents(); ++p) {
        sizes.push_back(static_cast<double>(ds.inventors_of(p).size()));
        yrs.push_back(ds.cohort_year(p));
    }
    std::vector<std::pair<std::string, LogNormalFit>> fits;
    if (ds.n_patents() >= 2) {
        CcdfSeries ts = ccdf(sizes, "team_size");
        write_ccdf_csv(out_dir / "teamsize_ccdf.csv", {&ts});
        fits.emplace_back("team_size", fit_lognormal(sizes));

        SplitCcdf tss = ccdf_split_halves(sizes, yrs, ds.min_year, ds.max_year, "team_size");
        std::vector<const CcdfSeries*> ptrs;
        for (const auto& s : tss.series) ptrs.push_back(&s);
        write_ccdf_csv(out_dir / "teamsize_ccdf_split.csv", ptrs);

        CcdfSeries is = ccdf(impact.impact, "impact");
        write_ccdf_csv(out_dir / "impact_ccdf.csv", {&is});
        auto n_pos = std::count_if(impact.impact.begin(), impact.impact.end(),
                                   [](double v) { return v > 0; });
        if (n_pos >= 2) fits.emplace_back("impact", fit_lognormal(impact.impact));

        SplitCcdf iss =
            ccdf_split_halves(impact.impact, yrs, ds.min_year, ds.max_year, "impact");
        ptrs.clear();
        for (const auto& s : iss.series) ptrs.push_back(&s);
        write_ccdf_csv(out_dir / "impact_ccdf_split.csv", ptrs);
    } else {
        write_ccdf_csv(out_dir / "teamsize_ccdf.csv", {});
        write_ccdf_csv(out_dir / "teamsize_ccdf_split.csv", {});
        write_ccdf_csv(out_dir / "impact_ccdf.csv", {});
        write_ccdf_csv(out_dir / "impact_ccdf_split.csv", {});
    }
    write_file_atomic(out_dir / "fits.json", lognormal_fit_json(fits));

    // Prediction 1
    P1Result p1 = prediction1(teams, ds, impact.impact, cfg);
    write_series_csv(out_dir / "p1_series.csv", {&p1.series});
    json ols_j{{"slope", p1.fit.slope},
               {"intercept", p1.fit.intercept},
               {"slope_p", p1.fit.slope_p},
               {"n", p1.fit.n},
               {"perfect_fit", p1.fit.perfect_fit},
               {"degenerate_predictor", p1.fit.degenerate_predictor}};
    write_file_atomic(out_dir / "p1_ols.json", ols_j.dump(2) + "\n");

    // Predictions 2 and 3 + rho
    auto anchors = find_hit_anchors(teams, ds, impact.impact, cfg.bound_cutoff);
    SeriesResult stay = prediction2_stay_series(teams, ds, impact.impact, anchors, cfg);
    auto events = find_switch_events(anchors, teams, ds);
    SeriesResult sw = prediction3_switch_series(events, impact.impact, stay, cfg);
    write_series_csv(out_dir / "p2_p3_series.csv", {&stay, &sw});
    write_tests_csv(out_dir / "p3_tests.csv", sw.tests);
    RhoSeries rho = rho_series(stay, sw, cfg.min_samples);
    write_rho_csv(out_dir / "rho.csv", {{cfg.hit.label(), &rho}});

    // Threshold sweep
    SweepResult sweep = threshold_sweep(teams, ds, impact.impact, sweep_thresholds, cfg);
    std::vector<std::pair<std::string, const RhoSeries*>> sweep_rhos;
    for (const auto& tr : sweep.series)
        sweep_rhos.emplace_back("gt:" + fmt_num(tr.threshold), &tr.rho);
    write_rho_csv(out_dir / "sweep_rho.csv", sweep_rhos);
    write_tests_csv(out_dir / "sweep_tests.csv", sweep.tests);

    // Diversity analyses
    DiversityResult tech = tech_diversity(teams, ds, impact.impact, cfg);
    write_series_csv(out_dir / "tech_series.csv", {&tech.inex, &tech.ex});
    write_tests_csv(out_dir / "tech_tests.csv", tech.tests);

    DiversityResult pdiv = pair_diversity(pairs, ds, impact.impact, cfg);
    write_series_csv(out_dir / "pair_series.csv", {&pdiv.inex, &pdiv.ex});
    write_tests_csv(out_dir / "pair_tests.csv", pdiv.tests);

    json prov{{"hit", cfg.hit.label()},
              {"bound_cutoff", cfg.bound_cutoff},
              {"min_samples", cfg.min_samples},
              {"impact_bin_width", cfg.impact_bin_width},
              {"hit_population", cfg.hit_population_team ? "team" : "all"},
              {"include_first_as_inex", cfg.include_first_as_inex},
              {"n_hit_anchors", anchors.size()},
              {"n_switch_events", events.size()},
              {"workspace", workspace.string()}};
    write_file_atomic(out_dir / "provenance.json", prov.dump(2) + "\n");
}

}  // namespace collabline
