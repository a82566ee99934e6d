// Benchmarks the OpenMP kernels against the serial reference implementation
// on the same synthetic dataset.

#include <benchmark/benchmark.h>

#include <vector>

#include "collabline/metrics.hpp"
#include "collabline/reference.hpp"
#include "collabline/sequences.hpp"
#include "collabline/stats.hpp"
#include "collabline/synth.hpp"

using namespace collabline;

namespace {

struct Corpus {
    Dataset ds;
    std::vector<std::pair<std::string, std::string>> citations;
    std::vector<reference::Patent> ref;
    std::vector<double> impact;
};

const Corpus& corpus() {
    static const Corpus c = [] {
        GenConfig cfg;
        cfg.seed = 12345;
        cfg.n_patents = 100000;
        cfg.n_inventors = 10000;
        cfg.start_year = 1980;
        cfg.end_year = 2009;
        SynthOutput out = generate(cfg);
        Corpus corpus{build_dataset(out.patents, out.citations), out.citations, {}, {}};
        const Dataset& ds = corpus.ds;
        for (PatentIdx p = 0; p < ds.n_patents(); ++p) {
            reference::Patent rp;
            rp.id = ds.patent_ids[p];
            rp.year = ds.cohort_year(p);
            for (auto m : ds.inventors_of(p)) rp.inventors.insert(ds.inventor_names[m]);
            for (auto cl : ds.classes_of(p)) rp.classes.insert(ds.class_names[cl]);
            corpus.ref.push_back(std::move(rp));
        }
        corpus.impact = compute_impact(corpus.ds).impact;
        return corpus;
    }();
    return c;
}

void BM_impact_parallel(benchmark::State& state) {
    const Corpus& c = corpus();
    for (auto _ : state) {
        ImpactTable tbl = compute_impact(c.ds);
        benchmark::DoNotOptimize(tbl.impact.data());
    }
}

void BM_impact_reference(benchmark::State& state) {
    const Corpus& c = corpus();
    for (auto _ : state) {
        auto tbl = reference::impact_table(c.ref, c.citations);
        benchmark::DoNotOptimize(&tbl);
    }
}

void BM_team_sequences_parallel(benchmark::State& state) {
    const Corpus& c = corpus();
    for (auto _ : state) {
        TeamSequences seqs = build_team_sequences(c.ds);
        benchmark::DoNotOptimize(seqs.patents.data());
    }
}

void BM_team_sequences_reference(benchmark::State& state) {
    const Corpus& c = corpus();
    for (auto _ : state) {
        auto seqs = reference::team_sequences(c.ref);
        benchmark::DoNotOptimize(&seqs);
    }
}

void BM_pair_sequences_parallel(benchmark::State& state) {
    const Corpus& c = corpus();
    for (auto _ : state) {
        PairSequences seqs = build_pair_sequences(c.ds);
        benchmark::DoNotOptimize(seqs.patents.data());
    }
}

void BM_pair_sequences_reference(benchmark::State& state) {
    const Corpus& c = corpus();
    for (auto _ : state) {
        auto seqs = reference::pair_sequences(c.ref);
        benchmark::DoNotOptimize(&seqs);
    }
}

void BM_bin_series(benchmark::State& state) {
    const Corpus& c = corpus();
    std::vector<double> coords;
    coords.reserve(c.impact.size());
    for (size_t i = 0; i < c.impact.size(); ++i)
        coords.push_back(static_cast<double>(1 + i % 40));
    BinSpec spec;
    spec.min_samples = 100;
    for (auto _ : state) {
        BinnedSeries s = bin_series(coords, c.impact, spec);
        benchmark::DoNotOptimize(s.bins.data());
    }
}

BENCHMARK(BM_impact_parallel);
BENCHMARK(BM_impact_reference);
BENCHMARK(BM_team_sequences_parallel);
BENCHMARK(BM_team_sequences_reference);
BENCHMARK(BM_pair_sequences_parallel);
BENCHMARK(BM_pair_sequences_reference);
BENCHMARK(BM_bin_series);

}  // namespace

BENCHMARK_MAIN();
