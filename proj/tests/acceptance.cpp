// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] is the path to the collabline CLI binary (used by the
// determinism and scale criteria).

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "collabline/analyses.hpp"
#include "collabline/ingest.hpp"
#include "collabline/metrics.hpp"
#include "collabline/reference.hpp"
#include "collabline/sequences.hpp"
#include "collabline/synth.hpp"

namespace fs = std::filesystem;
using namespace collabline;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
int g_failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report_line(int idx, const std::string& name, bool ok, const std::string& detail) {
    printf("criterion %d %-22s %s%s%s\n", idx, (name + ":").c_str(), ok ? "PASS" : "FAIL",
           detail.empty() ? "" : " ", detail.c_str());
    fflush(stdout);
    if (!ok) ++g_failures;
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("collabline_accept_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
    std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Small random dataset, structurally similar to real extracts: repeated teams,
// overlapping membership, multiple classes.
struct RandomData {
    std::vector<RawPatent> patents;
    std::vector<std::pair<std::string, std::string>> citations;
};

RandomData random_dataset(std::mt19937& rng, int n_patents, int n_inventors) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    RandomData data;
    for (int i = 0; i < n_patents; ++i) {
        char id[16];
        snprintf(id, sizeof(id), "P%05d", i);
        RawPatent p;
        p.id = id;
        p.year = 2000 + pick(10);
        int size = 1 + pick(4);
        while (static_cast<int>(p.inventors.size()) < size) {
            std::string name = "I" + std::to_string(pick(n_inventors));
            if (std::find(p.inventors.begin(), p.inventors.end(), name) == p.inventors.end())
                p.inventors.push_back(name);
        }
        p.classes.push_back("C" + std::to_string(pick(6)));
        if (pick(2)) p.classes.push_back("C" + std::to_string(pick(6)));
        data.patents.push_back(std::move(p));
    }
    int n_edges = n_patents;
    for (int e = 0; e < n_edges; ++e) {
        char a[16], b[16];
        snprintf(a, sizeof(a), "P%05d", pick(n_patents));
        snprintf(b, sizeof(b), "P%05d", pick(n_patents));
        if (std::string(a) != b) data.citations.emplace_back(a, b);
    }
    return data;
}

std::vector<reference::Patent> reference_view(const Dataset& ds,
                                              const std::vector<double>& impact) {
    std::vector<reference::Patent> out;
    for (PatentIdx p = 0; p < ds.n_patents(); ++p) {
        reference::Patent rp;
        rp.id = ds.patent_ids[p];
        rp.year = ds.cohort_year(p);
        for (auto m : ds.inventors_of(p)) rp.inventors.insert(ds.inventor_names[m]);
        for (auto c : ds.classes_of(p)) rp.classes.insert(ds.class_names[c]);
        rp.impact = impact.empty() ? 0.0 : impact[p];
        out.push_back(std::move(rp));
    }
    return out;
}

std::set<std::string> team_names(const Dataset& ds, const TeamSequences& seqs, size_t t) {
    std::set<std::string> out;
    for (auto m : seqs.members(ds, t)) out.insert(ds.inventor_names[m]);
    return out;
}

bool sorted_close(std::vector<double> a, std::vector<double> b, double tol) {
    if (a.size() != b.size()) return false;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (size_t i = 0; i < a.size(); ++i)
        if (std::fabs(a[i] - b[i]) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------

bool check_oracle_one(std::mt19937& rng) {
    RandomData data = random_dataset(rng, 100 + static_cast<int>(rng() % 401), 25);
    Dataset ds = build_dataset(data.patents, data.citations);
    ImpactTable tbl = compute_impact(ds);
    auto ref = reference_view(ds, tbl.impact);

    // impacts against the independent recomputation
    auto ref_impact = reference::impact_table(ref, data.citations);
    for (PatentIdx p = 0; p < ds.n_patents(); ++p)
        if (std::fabs(tbl.impact[p] - ref_impact.at(ds.patent_ids[p])) > 1e-12) return false;

    // team sequences
    TeamSequences teams = build_team_sequences(ds);
    auto ref_teams = reference::team_sequences(ref);
    if (teams.size() != ref_teams.size()) return false;
    for (size_t t = 0; t < teams.size(); ++t) {
        auto it = ref_teams.find(team_names(ds, teams, t));
        if (it == ref_teams.end()) return false;
        std::vector<std::string> ids;
        for (auto p : teams.entries(t)) ids.push_back(ds.patent_ids[p]);
        if (ids != it->second) return false;
    }

    // pair sequences
    PairSequences pairs = build_pair_sequences(ds);
    auto ref_pairs = reference::pair_sequences(ref);
    if (pairs.size() != ref_pairs.size()) return false;
    for (size_t s = 0; s < pairs.size(); ++s) {
        auto key = std::make_pair(ds.inventor_names[pairs.keys[s].a],
                                  ds.inventor_names[pairs.keys[s].b]);
        auto it = ref_pairs.find(key);
        if (it == ref_pairs.end()) return false;
        std::vector<std::string> ids;
        for (auto p : pairs.entries(s)) ids.push_back(ds.patent_ids[p]);
        if (ids != it->second) return false;
    }

    // prediction1 observations
    AnalysisConfig cfg;
    cfg.min_samples = 1;
    P1Result p1 = prediction1(teams, ds, tbl.impact, cfg);
    auto ref_p1 = reference::prediction1_observations(ref);
    if (p1.impacts.size() != ref_p1.size()) return false;
    std::multiset<std::pair<double, long>> got, want;
    for (size_t i = 0; i < p1.impacts.size(); ++i)
        got.insert({p1.impacts[i], static_cast<long>(p1.counts[i])});
    for (const auto& [id, ob] : ref_p1) want.insert(ob);
    if (got != want) return false;

    // hit-anchored stay series (per dyadic bin, impacts to 1e-12)
    const double cutoff = 2.0;
    cfg.hit = HitSpec{HitSpec::Mode::absolute, cutoff};
    cfg.bound_cutoff = cutoff;
    auto anchors = find_hit_anchors(teams, ds, tbl.impact, cutoff);
    SeriesResult stay = prediction2_stay_series(teams, ds, tbl.impact, anchors, cfg);
    auto ref_stay = reference::stay_observations(ref, cutoff);
    std::map<int64_t, std::vector<double>> want_bins;
    for (const auto& o : ref_stay) want_bins[dyadic_bin_label(o.r)].push_back(o.impact);
    if (stay.samples.size() != want_bins.size()) return false;
    for (const auto& [key, vals] : stay.samples) {
        auto it = want_bins.find(key);
        if (it == want_bins.end() || !sorted_close(vals, it->second, 1e-12)) return false;
    }

    // switch-event alignment (full tuples, integer-exact)
    auto events = find_switch_events(anchors, teams, ds);
    auto ref_events = reference::switch_observations(ref, cutoff);
    if (events.size() != ref_events.size()) return false;
    using Tup = std::tuple<std::set<std::string>, std::string, std::set<std::string>,
                           std::string, long>;
    std::multiset<Tup> egot, ewant;
    for (const auto& e : events)
        egot.insert({team_names(ds, teams, e.hit_team),
                     ds.patent_ids[teams.entries(e.hit_team)[e.hit_pos]],
                     team_names(ds, teams, e.new_team), ds.patent_ids[e.first_patent],
                     e.aligned_r});
    for (const auto& o : ref_events)
        ewant.insert({o.hit_team, o.hit_patent, o.new_team, o.first_patent, o.aligned_r});
    return egot == ewant;
}

void criterion1() {
    auto t0 = Clock::now();
    std::mt19937 rng(20240801);
    int ok = 0;
    for (int i = 0; i < 50; ++i) ok += check_oracle_one(rng);
    double secs = seconds_since(t0);
    char detail[128];
    snprintf(detail, sizeof(detail), "(%d/50 datasets, %.1fs)", ok, secs);
    report_line(1, "oracle-equivalence", ok == 50 && secs < 30.0, detail);
}

bool cohort_means_unit(const Dataset& ds, const ImpactTable& tbl) {
    std::map<int32_t, std::pair<double, uint64_t>> acc;
    for (PatentIdx p = 0; p < ds.n_patents(); ++p) {
        auto& [sum, n] = acc[ds.cohort_year(p)];
        sum += tbl.impact[p];
        ++n;
    }
    for (const auto& [year, sn] : acc) {
        if (tbl.cohort_means.at(year) <= 0) continue;
        if (std::fabs(sn.first / static_cast<double>(sn.second) - 1.0) > 1e-9) return false;
    }
    return true;
}

void criterion2() {
    auto t0 = Clock::now();
    bool ok = true;
    std::mt19937 rng(7);
    for (int i = 0; i < 10 && ok; ++i) {
        RandomData data = random_dataset(rng, 400, 30);
        Dataset ds = build_dataset(data.patents, data.citations);
        ok = cohort_means_unit(ds, compute_impact(ds));
    }
    for (uint64_t seed = 1; seed <= 3 && ok; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.n_patents = 5000;
        cfg.n_inventors = 500;
        SynthOutput out = generate(cfg);
        Dataset ds = build_dataset(out.patents, out.citations);
        ok = cohort_means_unit(ds, compute_impact(ds));
    }
    char detail[64];
    snprintf(detail, sizeof(detail), "(%.1fs)", seconds_since(t0));
    report_line(2, "impact-invariant", ok, detail);
}

void criterion3() {
    auto t0 = Clock::now();
    double worst_notie = 0, worst_tie = 0;
    bool ok = true;

    // exhaustive tieless grid: values are the ranks themselves
    for (int n1 = 1; n1 <= 7 && ok; ++n1) {
        for (int n2 = 1; n2 <= 7 && ok; ++n2) {
            const int N = n1 + n2;
            std::vector<int> idx(n1);
            for (int i = 0; i < n1; ++i) idx[i] = i;
            while (true) {
                std::vector<double> g, l;
                std::vector<bool> taken(N, false);
                for (int i : idx) taken[i] = true;
                for (int v = 0; v < N; ++v)
                    (taken[v] ? g : l).push_back(static_cast<double>(v + 1));
                double p = rank_sum_one_sided(g, l).p_one_sided;
                double exact = reference::rank_sum_exact_p(g, l);
                worst_notie = std::max(worst_notie, std::fabs(p - exact));
                if (std::fabs(p - exact) > 0.02) {
                    ok = false;
                    break;
                }
                // next combination
                int k = n1 - 1;
                while (k >= 0 && idx[k] == N - n1 + k) --k;
                if (k < 0) break;
                ++idx[k];
                for (int j = k + 1; j < n1; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
    }

    const std::vector<std::pair<std::vector<double>, std::vector<double>>> tie_fixtures{
        {{1, 2, 2, 3}, {1, 1, 2, 2}},
        {{5, 5, 5, 6}, {5, 5, 4, 4}},
        {{1, 1, 2}, {1, 2, 2, 2}},
        {{0, 0, 1, 1, 1}, {0, 0, 0, 1}},
        {{2, 3, 3, 3, 4}, {2, 2, 3, 4}},
        {{1, 1, 1, 2, 2}, {1, 1, 2, 2, 2}},
        {{3, 3, 4, 4, 5, 5}, {2, 2, 3, 3, 4, 4}},
        {{1, 2, 3, 3, 3}, {3, 3, 3, 4, 5}},
        {{7, 7, 7, 8, 9}, {6, 7, 7, 8, 8}},
        {{1, 1, 5, 5}, {1, 5, 5, 5}},
    };
    for (const auto& [g, l] : tie_fixtures) {
        double p = rank_sum_one_sided(g, l).p_one_sided;
        double exact = reference::rank_sum_exact_p(g, l);
        worst_tie = std::max(worst_tie, std::fabs(p - exact));
        if (std::fabs(p - exact) > 0.03) ok = false;
    }

    char detail[128];
    snprintf(detail, sizeof(detail), "(max |dp| no-tie %.4f, ties %.4f, %.1fs)", worst_notie,
             worst_tie, seconds_since(t0));
    report_line(3, "rank-sum-correctness", ok, detail);
}

GenConfig planted_config(uint64_t seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.n_patents = 50000;
    cfg.n_inventors = 5000;
    cfg.start_year = 1980;
    cfg.end_year = 2010;
    return cfg;
}

struct PipelineRun {
    Dataset ds;
    ImpactTable impact;
    TeamSequences teams;
};

PipelineRun run_pipeline(const GenConfig& cfg) {
    SynthOutput out = generate(cfg);
    PipelineRun run{build_dataset(out.patents, out.citations), {}, {}};
    run.impact = compute_impact(run.ds);
    run.teams = build_team_sequences(run.ds);
    return run;
}

void criterion4() {
    bool ok = true;
    std::string detail;

    {  // alpha sweep
        auto t0 = Clock::now();
        int hits = 0;
        for (uint64_t seed = 1; seed <= 20; ++seed) {
            GenConfig cfg = planted_config(seed);
            cfg.continuation_gain = 0.1;
            PipelineRun run = run_pipeline(cfg);
            AnalysisConfig acfg;
            P1Result p1 = prediction1(run.teams, run.ds, run.impact.impact, acfg);
            if (p1.fit.slope > 0 && p1.fit.slope_p < 0.01) ++hits;
        }
        double secs = seconds_since(t0);
        if (hits < 19 || secs >= 300) ok = false;
        detail += "(alpha " + std::to_string(hits) + "/20 in " +
                  std::to_string(static_cast<int>(secs)) + "s";
    }

    {  // beta sweep
        auto t0 = Clock::now();
        int hits = 0;
        for (uint64_t seed = 101; seed <= 120; ++seed) {
            GenConfig cfg = planted_config(seed);
            cfg.decline_rate = 0.05;
            PipelineRun run = run_pipeline(cfg);
            AnalysisConfig acfg;
            acfg.hit = HitSpec{HitSpec::Mode::absolute, 2.0};
            acfg.bound_cutoff = 2.0;
            acfg.min_samples = 1;
            auto anchors = find_hit_anchors(run.teams, run.ds, run.impact.impact, 2.0);
            SeriesResult stay =
                prediction2_stay_series(run.teams, run.ds, run.impact.impact, anchors, acfg);
            if (!stay.samples.count(1) || !stay.samples.count(4)) continue;
            RankSumResult t = rank_sum_one_sided(stay.samples.at(1), stay.samples.at(4));
            if (t.p_one_sided < 0.05) ++hits;
        }
        double secs = seconds_since(t0);
        if (hits < 19 || secs >= 300) ok = false;
        detail += ", beta " + std::to_string(hits) + "/20 in " +
                  std::to_string(static_cast<int>(secs)) + "s";
    }

    {  // gamma sweep
        auto t0 = Clock::now();
        int hits = 0;
        int tested_bins = 0;
        for (uint64_t seed = 201; seed <= 220; ++seed) {
            GenConfig cfg = planted_config(seed);
            cfg.diversity_boost = 0.2;
            cfg.class_pool = 8;  // small pool so Ex bins clear min_samples
            PipelineRun run = run_pipeline(cfg);
            AnalysisConfig acfg;
            acfg.min_samples = 1000;
            DiversityResult res = tech_diversity(run.teams, run.ds, run.impact.impact, acfg);
            bool all = !res.tests.empty();
            for (const auto& t : res.tests) all = all && t.test.p_one_sided < 0.05;
            tested_bins += static_cast<int>(res.tests.size());
            if (all) ++hits;
        }
        double secs = seconds_since(t0);
        if (hits < 19 || secs >= 300) ok = false;
        detail += ", gamma " + std::to_string(hits) + "/20 over " +
                  std::to_string(tested_bins) + " bins in " +
                  std::to_string(static_cast<int>(secs)) + "s)";
    }

    report_line(4, "planted-effects", ok, detail);
}

void criterion5() {
    auto t0 = Clock::now();
    int p1_rejects = 0, rho_ok = 0, rho_bins = 0;
    for (uint64_t seed = 1001; seed <= 1020; ++seed) {
        GenConfig cfg = planted_config(seed);
        PipelineRun run = run_pipeline(cfg);

        AnalysisConfig acfg;
        P1Result p1 = prediction1(run.teams, run.ds, run.impact.impact, acfg);
        if (!p1.fit.degenerate_predictor && p1.fit.slope_p < 0.05) ++p1_rejects;

        acfg.hit = HitSpec{HitSpec::Mode::absolute, 2.0};
        acfg.bound_cutoff = 2.0;
        acfg.min_samples = 1000;
        auto anchors = find_hit_anchors(run.teams, run.ds, run.impact.impact, 2.0);
        SeriesResult stay =
            prediction2_stay_series(run.teams, run.ds, run.impact.impact, anchors, acfg);
        auto events = find_switch_events(anchors, run.teams, run.ds);
        SeriesResult sw =
            prediction3_switch_series(events, run.impact.impact, stay, acfg);
        RhoSeries rho = rho_series(stay, sw, 1000);
        bool in_band = true;
        for (const auto& p : rho.points) {
            ++rho_bins;
            in_band = in_band && p.rho >= 0.9 && p.rho <= 1.1;
        }
        if (in_band) ++rho_ok;
    }
    bool ok = p1_rejects <= 3 && rho_ok >= 18;
    char detail[160];
    snprintf(detail, sizeof(detail), "(p1 rejects %d/20, rho in band %d/20 over %d bins, %.0fs)",
             p1_rejects, rho_ok, rho_bins, seconds_since(t0));
    report_line(5, "null-safety", ok, detail);
}

void criterion6() {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> nrm(0.5, 1.2);
    std::vector<double> draws(100000);
    for (auto& v : draws) v = std::exp(nrm(rng));
    LogNormalFit fit = fit_lognormal(draws);
    bool ok = std::fabs(fit.mu - 0.5) <= 0.02 && std::fabs(fit.sigma - 1.2) <= 0.02;
    char detail[96];
    snprintf(detail, sizeof(detail), "(mu %.4f, sigma %.4f)", fit.mu, fit.sigma);
    report_line(6, "lognormal-mle", ok, detail);
}

// All files except manifest.json must be byte-identical between two report
// directories (the manifest records wall time).
bool same_outputs(const fs::path& a, const fs::path& b) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(a))
        if (e.path().filename() != "manifest.json") names.push_back(e.path().filename());
    std::sort(names.begin(), names.end());
    std::vector<std::string> other;
    for (const auto& e : fs::directory_iterator(b))
        if (e.path().filename() != "manifest.json") other.push_back(e.path().filename());
    std::sort(other.begin(), other.end());
    if (names != other) return false;
    for (const auto& n : names)
        if (slurp(a / n) != slurp(b / n)) return false;
    return !names.empty();
}

void criterion7() {
    auto t0 = Clock::now();
    fs::path dir = scratch("determinism");
    GenConfig cfg;
    cfg.seed = 11;
    cfg.n_patents = 5000;
    cfg.n_inventors = 500;
    write_synth_csv(generate(cfg), dir);

    bool ok = run_cli("ingest --patents " + (dir / "patents.csv").string() + " --citations " +
                      (dir / "citations.csv").string() + " --workspace " +
                      (dir / "ws").string()) == 0;
    std::vector<std::pair<std::string, std::string>> runs{
        {"r1", "--threads 4"}, {"r2", "--threads 4"}, {"r3", "--threads 4"},
        {"t1", "--threads 1"}, {"t16", "--threads 16"}};
    for (const auto& [name, threads] : runs)
        ok = ok && run_cli(threads + " report --workspace " + (dir / "ws").string() +
                           " --hit top10 --min-samples 10 --out " +
                           (dir / name).string()) == 0;
    for (const auto& [name, threads] : runs)
        ok = ok && same_outputs(dir / "r1", dir / name);
    char detail[64];
    snprintf(detail, sizeof(detail), "(%.0fs)", seconds_since(t0));
    report_line(7, "determinism", ok, detail);
}

void criterion8() {
    fs::path dir = scratch("scale");
    {
        GenConfig cfg;
        cfg.seed = 99;
        cfg.n_patents = 1000000;
        cfg.n_inventors = 120000;
        cfg.start_year = 1980;
        cfg.end_year = 2009;
        cfg.cite_scale = 3.1;  // ~5M citation edges at the default impact moments
        write_synth_csv(generate(cfg), dir);
    }
    uintmax_t n_edges = 0;
    {
        std::ifstream in(dir / "citations.csv");
        std::string line;
        while (std::getline(in, line)) ++n_edges;
        --n_edges;  // header
    }

    auto t0 = Clock::now();
    std::string ws = (dir / "ws").string();
    bool ok = run_cli("ingest --patents " + (dir / "patents.csv").string() + " --citations " +
                      (dir / "citations.csv").string() + " --workspace " + ws) == 0;
    ok = ok && run_cli("impact --workspace " + ws) == 0;
    ok = ok && run_cli("sequences --kind team --workspace " + ws + " --out " +
                       (dir / "seq.bin").string()) == 0;
    ok = ok && run_cli("report --workspace " + ws + " --hit top10 --out " +
                       (dir / "report").string()) == 0;
    double secs = seconds_since(t0);

    struct rusage ru {};
    getrusage(RUSAGE_CHILDREN, &ru);
    double peak_gb = static_cast<double>(ru.ru_maxrss) / (1024.0 * 1024.0);

    ok = ok && secs < 60.0 && peak_gb < 4.0;
    char detail[160];
    snprintf(detail, sizeof(detail), "(%ju edges, %.1fs, peak %.2f GB)",
             static_cast<uintmax_t>(n_edges), secs, peak_gb);
    report_line(8, "scale", ok, detail);
    fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        fprintf(stderr, "usage: acceptance <path-to-collabline-cli>\n");
        return 2;
    }
    g_cli = argv[1];

    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();

    printf("%s\n", g_failures == 0 ? "all criteria passed" : "FAILURES present");
    return g_failures == 0 ? 0 : 1;
}
