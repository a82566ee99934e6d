#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "collabline/analyses.hpp"
#include "collabline/ingest.hpp"
#include "collabline/par.hpp"
#include "collabline/report.hpp"
#include "collabline/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace collabline;

namespace {

constexpr const char* kVersion = "collabline 0.1.0";

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

uint64_t hash_config(const std::string& canonical) { return fnv1a(canonical); }

std::string default_workspace() {
    const char* env = std::getenv("COLLABLINE_WORKSPACE");
    return env ? env : "";
}

std::vector<std::pair<std::string, std::string>> workspace_digests(const fs::path& ws) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const char* name : {"patents.bin", "citations.bin", "impact.bin"})
        if (fs::exists(ws / name)) out.emplace_back(name, hex64(digest_file(ws / name)));
    return out;
}

ImpactTable impact_of(const Dataset& ds, const fs::path& ws) {
    if (auto existing = load_impact(ws, ds.n_patents())) return std::move(*existing);
    ImpactTable tbl = compute_impact(ds);
    save_impact(tbl, ws);
    return tbl;
}

std::string provenance_json(const AnalysisConfig& cfg, const fs::path& ws,
                            const std::string& kind) {
    json prov{{"analysis", kind},
              {"hit", cfg.hit.label()},
              {"bound_cutoff", cfg.bound_cutoff},
              {"min_samples", cfg.min_samples},
              {"impact_bin_width", cfg.impact_bin_width},
              {"hit_population", cfg.hit_population_team ? "team" : "all"},
              {"include_first_as_inex", cfg.include_first_as_inex},
              {"workspace", ws.string()}};
    return prov.dump(2) + "\n";
}

struct SequenceDump {
    std::string kind;
    fs::path out;
    std::string dump_csv;
};

void dump_sequences(const Dataset& ds, const SequenceDump& req) {
    std::string bin;
    std::string csv;
    auto append_u64 = [&](uint64_t v) { bin.append(reinterpret_cast<const char*>(&v), 8); };
    if (req.kind == "team") {
        TeamSequences seqs = build_team_sequences(ds);
        bin = "CLSQteam";
        append_u64(seqs.size());
        for (size_t t = 0; t < seqs.size(); ++t) {
            auto entries = seqs.entries(t);
            append_u64(entries.size());
            for (PatentIdx p : entries) append_u64(p);
        }
        if (!req.dump_csv.empty()) {
            csv = "key,patent_id,year,r\n";
            for (size_t t = 0; t < seqs.size(); ++t) {
                auto members = seqs.members(ds, t);
                std::string key;
                for (size_t i = 0; i < members.size(); ++i) {
                    if (i) key += ';';
                    key += ds.inventor_names[members[i]];
                }
                auto entries = seqs.entries(t);
                for (size_t k = 0; k < entries.size(); ++k) {
                    csv += key + ',' + ds.patent_ids[entries[k]] + ',' +
                           std::to_string(ds.cohort_year(entries[k])) + ',' +
                           std::to_string(k + 1) + '\n';
                }
            }
        }
    } else {
        PairSequences seqs = build_pair_sequences(ds);
        bin = "CLSQpair";
        append_u64(seqs.size());
        for (size_t s = 0; s < seqs.size(); ++s) {
            append_u64(seqs.keys[s].a);
            append_u64(seqs.keys[s].b);
            auto entries = seqs.entries(s);
            append_u64(entries.size());
            for (PatentIdx p : entries) append_u64(p);
        }
        if (!req.dump_csv.empty()) {
            csv = "key,patent_id,year,r,others\n";
            for (size_t s = 0; s < seqs.size(); ++s) {
                const PairKey key = seqs.keys[s];
                std::string key_s =
                    ds.inventor_names[key.a] + ";" + ds.inventor_names[key.b];
                auto entries = seqs.entries(s);
                for (size_t k = 0; k < entries.size(); ++k) {
                    std::string others;
                    for (InventorId m : ds.inventors_of(entries[k])) {
                        if (m == key.a || m == key.b) continue;
                        if (!others.empty()) others += ';';
                        others += ds.inventor_names[m];
                    }
                    csv += key_s + ',' + ds.patent_ids[entries[k]] + ',' +
                           std::to_string(ds.cohort_year(entries[k])) + ',' +
                           std::to_string(k + 1) + ',' + others + '\n';
                }
            }
        }
    }
    write_file_atomic(req.out, bin);
    if (!req.dump_csv.empty()) write_file_atomic(req.dump_csv, csv);
}

}  // namespace

int main(int argc, char** argv) {
    auto start = std::chrono::steady_clock::now();
    const std::string cmdline = join_args(argc, argv);

    CLI::App app{"Collaboration-analytics pipeline for patent-like datasets"};
    app.set_version_flag("--version", std::string(kVersion));
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: all cores)");
    app.require_subcommand(1);

    // ingest
    auto* c_ingest = app.add_subcommand("ingest", "Parse CSVs and materialize a workspace");
    std::string patents_csv, citations_csv, ws = default_workspace();
    bool strict = false, grant_cohorts = false;
    c_ingest->add_option("--patents", patents_csv)->required();
    c_ingest->add_option("--citations", citations_csv)->required();
    c_ingest->add_option("--workspace", ws);
    c_ingest->add_flag("--strict", strict, "Promote dropped citation edges to errors");
    c_ingest->add_flag("--grant-cohorts", grant_cohorts,
                       "Use the grant_year column for impact cohorts");

    // summarize
    auto* c_summ = app.add_subcommand("summarize", "Recompute the dataset summary");
    c_summ->add_option("--workspace", ws);

    // impact
    auto* c_impact = app.add_subcommand("impact", "Compute normalized impact");
    c_impact->add_option("--workspace", ws);

    // distfit
    auto* c_dist = app.add_subcommand("distfit", "CCDF + log-normal fit export");
    std::string variable = "teamsize", dist_out = "series.csv";
    bool split_halves = false;
    c_dist->add_option("--workspace", ws);
    c_dist->add_option("--variable", variable)->check(CLI::IsMember({"teamsize", "impact"}));
    c_dist->add_flag("--split-halves", split_halves);
    c_dist->add_option("--out", dist_out);

    // sequences
    auto* c_seq = app.add_subcommand("sequences", "Build repetition sequences");
    std::string seq_kind = "team", seq_out = "seq.bin", seq_csv;
    c_seq->add_option("--kind", seq_kind)->check(CLI::IsMember({"team", "pair"}));
    c_seq->add_option("--workspace", ws);
    c_seq->add_option("--out", seq_out);
    c_seq->add_option("--dump-csv", seq_csv);

    // analyze
    auto* c_an = app.add_subcommand("analyze", "Run one analysis");
    std::string kind, hit = "top10", out_dir = "out", hit_pop = "all";
    uint64_t min_samples = 100;
    double impact_bin_width = 1.0;
    bool include_first = false;
    std::vector<double> thresholds{2, 4, 8, 16};
    c_an->add_option("kind", kind)
        ->required()
        ->check(CLI::IsMember({"p1", "p2", "p3", "rho", "sweep", "tech", "pair"}));
    c_an->add_option("--workspace", ws);
    c_an->add_option("--hit", hit, "topN or gt:X");
    c_an->add_option("--min-samples", min_samples);
    c_an->add_option("--impact-bin-width", impact_bin_width);
    c_an->add_option("--hit-population", hit_pop)
        ->check(CLI::IsMember({"all", "team"}));
    c_an->add_flag("--include-first-as-inex", include_first);
    c_an->add_option("--thresholds", thresholds, "Absolute cutoffs for sweep");
    c_an->add_option("--out", out_dir);

    // compare-p1
    auto* c_cmp = app.add_subcommand("compare-p1",
                                     "Cross-workspace comparison of subsequent-patent counts");
    std::string ws1, ws2;
    c_cmp->add_option("ws1", ws1)->required();
    c_cmp->add_option("ws2", ws2)->required();
    c_cmp->add_option("--min-samples", min_samples);
    c_cmp->add_option("--impact-bin-width", impact_bin_width);
    c_cmp->add_option("--out", out_dir);

    // synth
    auto* c_synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    std::string synth_config;
    c_synth->add_option("--config", synth_config)->required();
    c_synth->add_option("--out", out_dir);

    // report
    auto* c_rep = app.add_subcommand("report", "All figure series for one workspace");
    c_rep->add_option("--workspace", ws);
    c_rep->add_option("--hit", hit);
    c_rep->add_option("--min-samples", min_samples);
    c_rep->add_option("--impact-bin-width", impact_bin_width);
    c_rep->add_option("--hit-population", hit_pop)
        ->check(CLI::IsMember({"all", "team"}));
    c_rep->add_flag("--include-first-as-inex", include_first);
    c_rep->add_option("--thresholds", thresholds);
    c_rep->add_option("--out", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        set_threads(threads);
        auto wall = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        };

        auto make_cfg = [&] {
            AnalysisConfig cfg;
            cfg.hit = HitSpec::parse(hit);
            cfg.min_samples = min_samples;
            cfg.impact_bin_width = impact_bin_width;
            cfg.hit_population_team = hit_pop == "team";
            cfg.include_first_as_inex = include_first;
            return cfg;
        };

        if (*c_ingest) {
            IngestOptions opts;
            opts.strict = strict;
            opts.grant_cohorts = grant_cohorts;
            if (ws.empty()) throw UsageError("no workspace given (flag or COLLABLINE_WORKSPACE)");
            IngestReport rep = ingest(patents_csv, citations_csv, ws, opts);
            std::cout << rep.to_json();
        } else if (*c_summ) {
            std::cout << summarize(ws).to_json();
        } else if (*c_impact) {
            Dataset ds = load_workspace(ws);
            ImpactTable tbl = compute_impact(ds);
            save_impact(tbl, ws);
            json j{{"n_patents", tbl.impact.size()}, {"n_cohorts", tbl.cohort_means.size()}};
            std::cout << j.dump(2) << "\n";
        } else if (*c_dist) {
            Dataset ds = load_workspace(ws);
            std::vector<double> values;
            std::vector<int32_t> years;
            for (PatentIdx p = 0; p < ds.n_patents(); ++p) years.push_back(ds.cohort_year(p));
            if (variable == "teamsize") {
                for (PatentIdx p = 0; p < ds.n_patents(); ++p)
                    values.push_back(static_cast<double>(ds.inventors_of(p).size()));
            } else {
                values = impact_of(ds, ws).impact;
            }
            std::vector<CcdfSeries> series;
            if (split_halves) {
                SplitCcdf s =
                    ccdf_split_halves(values, years, ds.min_year, ds.max_year, variable);
                series = std::move(s.series);
                for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
            } else {
                series.push_back(ccdf(values, variable));
            }
            std::vector<const CcdfSeries*> ptrs;
            for (const auto& s : series) ptrs.push_back(&s);
            if (fs::path(dist_out).has_parent_path())
                fs::create_directories(fs::path(dist_out).parent_path());
            write_ccdf_csv(dist_out, ptrs);
            std::vector<std::pair<std::string, LogNormalFit>> fits;
            fits.emplace_back(variable, fit_lognormal(values));
            fs::path fit_path = fs::path(dist_out).parent_path() / "fit.json";
            write_file_atomic(fit_path, lognormal_fit_json(fits));
        } else if (*c_seq) {
            Dataset ds = load_workspace(ws);
            dump_sequences(ds, {seq_kind, seq_out, seq_csv});
        } else if (*c_an) {
            Dataset ds = load_workspace(ws);
            ImpactTable impact = impact_of(ds, ws);
            AnalysisConfig cfg = make_cfg();
            fs::create_directories(out_dir);
            TeamSequences teams = build_team_sequences(ds);

            bool needs_hits = kind == "p2" || kind == "p3" || kind == "rho";
            if (needs_hits && !impact.impact.empty()) {
                cfg.bound_cutoff =
                    bind_hit_threshold(cfg.hit, hit_population(teams, ds, impact.impact, cfg));
                record_cutoff(ws, cfg.hit.label(), cfg.bound_cutoff);
            }
            auto anchors = needs_hits
                               ? find_hit_anchors(teams, ds, impact.impact, cfg.bound_cutoff)
                               : std::vector<HitAnchor>{};

            fs::path dir(out_dir);
            if (kind == "p1") {
                P1Result p1 = prediction1(teams, ds, impact.impact, cfg);
                write_series_csv(dir / "series.csv", {&p1.series});
                write_tests_csv(dir / "tests.csv", {});
                json j{{"slope", p1.fit.slope},
                       {"intercept", p1.fit.intercept},
                       {"slope_p", p1.fit.slope_p},
                       {"n", p1.fit.n},
                       {"perfect_fit", p1.fit.perfect_fit},
                       {"degenerate_predictor", p1.fit.degenerate_predictor}};
                write_file_atomic(dir / "ols.json", j.dump(2) + "\n");
            } else if (kind == "p2") {
                SeriesResult stay =
                    prediction2_stay_series(teams, ds, impact.impact, anchors, cfg);
                write_series_csv(dir / "series.csv", {&stay});
                write_tests_csv(dir / "tests.csv", {});
            } else if (kind == "p3" || kind == "rho") {
                SeriesResult stay =
                    prediction2_stay_series(teams, ds, impact.impact, anchors, cfg);
                auto events = find_switch_events(anchors, teams, ds);
                SeriesResult sw = prediction3_switch_series(events, impact.impact, stay, cfg);
                write_series_csv(dir / "series.csv", {&stay, &sw});
                write_tests_csv(dir / "tests.csv", sw.tests);
                if (kind == "rho") {
                    RhoSeries rho = rho_series(stay, sw, cfg.min_samples);
                    write_rho_csv(dir / "rho.csv", {{cfg.hit.label(), &rho}});
                }
            } else if (kind == "sweep") {
                SweepResult sweep =
                    threshold_sweep(teams, ds, impact.impact, thresholds, cfg);
                std::vector<const SeriesResult*> all;
                std::vector<std::pair<std::string, const RhoSeries*>> rhos;
                for (const auto& tr : sweep.series) {
                    all.push_back(&tr.stay);
                    all.push_back(&tr.switch_);
                    rhos.emplace_back("gt:" + fmt_num(tr.threshold), &tr.rho);
                }
                write_series_csv(dir / "series.csv", all);
                write_rho_csv(dir / "rho.csv", rhos);
                write_tests_csv(dir / "tests.csv", sweep.tests);
            } else if (kind == "tech") {
                DiversityResult res = tech_diversity(teams, ds, impact.impact, cfg);
                write_series_csv(dir / "series.csv", {&res.inex, &res.ex});
                write_tests_csv(dir / "tests.csv", res.tests);
            } else if (kind == "pair") {
                PairSequences pairs = build_pair_sequences(ds);
                DiversityResult res = pair_diversity(pairs, ds, impact.impact, cfg);
                write_series_csv(dir / "series.csv", {&res.inex, &res.ex});
                write_tests_csv(dir / "tests.csv", res.tests);
            }
            write_file_atomic(dir / "provenance.json", provenance_json(cfg, ws, kind));
            write_run_manifest(dir, cmdline, kVersion,
                               hash_config(kind + "|" + hit + "|" +
                                           std::to_string(min_samples) + "|" +
                                           fmt_num(impact_bin_width) + "|" + hit_pop),
                               workspace_digests(ws), wall());
        } else if (*c_cmp) {
            AnalysisConfig cfg = make_cfg();
            Dataset da = load_workspace(ws1), db = load_workspace(ws2);
            ImpactTable ia = impact_of(da, ws1), ib = impact_of(db, ws2);
            TeamSequences ta = build_team_sequences(da), tb = build_team_sequences(db);
            P1Result pa = prediction1(ta, da, ia.impact, cfg);
            P1Result pb = prediction1(tb, db, ib.impact, cfg);
            pa.series.label = "ws1_subsequent_patents";
            pb.series.label = "ws2_subsequent_patents";
            fs::create_directories(out_dir);
            fs::path dir(out_dir);
            write_series_csv(dir / "series.csv", {&pa.series, &pb.series});
            write_tests_csv(dir / "tests.csv", compare_p1(pa, pb, cfg));
            json prov{{"analysis", "compare-p1"},
                      {"ws1", ws1},
                      {"ws2", ws2},
                      {"min_samples", cfg.min_samples},
                      {"impact_bin_width", cfg.impact_bin_width},
                      {"direction", "ws1>ws2"}};
            write_file_atomic(dir / "provenance.json", prov.dump(2) + "\n");
            auto digests = workspace_digests(ws1);
            for (auto& [n, d] : workspace_digests(ws2)) digests.emplace_back("ws2/" + n, d);
            write_run_manifest(dir, cmdline, kVersion, hash_config("compare-p1"), digests,
                               wall());
        } else if (*c_synth) {
            GenConfig cfg = GenConfig::from_json_file(synth_config);
            SynthOutput out = generate(cfg);
            write_synth_csv(out, out_dir);
            write_file_atomic(fs::path(out_dir) / "gen.json", cfg.to_json());
            write_run_manifest(fs::path(out_dir), cmdline, kVersion,
                               hash_config(cfg.to_json()),
                               {{"config", hex64(digest_file(synth_config))}}, wall());
        } else if (*c_rep) {
            AnalysisConfig cfg = make_cfg();
            run_report(ws, cfg, thresholds, out_dir);
            write_run_manifest(fs::path(out_dir), cmdline, kVersion,
                               hash_config(hit + "|" + std::to_string(min_samples) + "|" +
                                           fmt_num(impact_bin_width) + "|" + hit_pop),
                               workspace_digests(ws), wall());
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
