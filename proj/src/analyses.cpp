#include "collabline/analyses.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace collabline {

namespace {

SeriesResult make_series(const std::string& label, std::span<const double> coords,
                         std::span<const double> values, const BinSpec& spec) {
    SeriesResult out;
    out.label = label;
    out.binned = bin_series(coords, values, spec);
    for (size_t i = 0; i < coords.size(); ++i) {
        int64_t key = spec.kind == BinSpec::Kind::repetition_dyadic
                          ? dyadic_bin_label(static_cast<int64_t>(std::llround(coords[i])))
                          : static_cast<int64_t>(std::floor(coords[i] / spec.width));
        out.samples[key].push_back(values[i]);
    }
    return out;
}

BinSpec dyadic_spec(const AnalysisConfig& cfg) {
    BinSpec spec;
    spec.kind = BinSpec::Kind::repetition_dyadic;
    spec.min_samples = cfg.min_samples;
    return spec;
}

bool bin_visible(const SeriesResult& s, int64_t key, uint64_t min_samples) {
    auto it = s.samples.find(key);
    return it != s.samples.end() && it->second.size() >= min_samples;
}

std::vector<TestPoint> per_bin_tests(const SeriesResult& greater, const SeriesResult& lesser,
                                     uint64_t min_samples) {
    std::vector<TestPoint> tests;
    for (const auto& [key, gsamp] : greater.samples) {
        if (gsamp.size() < min_samples) continue;
        auto it = lesser.samples.find(key);
        if (it == lesser.samples.end() || it->second.size() < min_samples) continue;
        TestPoint tp;
        tp.bin = static_cast<double>(key);
        tp.test = rank_sum_one_sided(gsamp, it->second);
        tests.push_back(tp);
    }
    return tests;
}

}  // namespace

std::vector<double> hit_population(const TeamSequences& seqs, const Dataset& ds,
                                   std::span<const double> impact, const AnalysisConfig& cfg) {
    (void)ds;
    if (!cfg.hit_population_team) return {impact.begin(), impact.end()};
    std::vector<double> pop;
    pop.reserve(seqs.patents.size());
    for (PatentIdx p : seqs.patents) pop.push_back(impact[p]);
    return pop;
}

P1Result prediction1(const TeamSequences& seqs, const Dataset& ds,
                     std::span<const double> impact, const AnalysisConfig& cfg) {
    (void)ds;
    P1Result res;
    for (size_t t = 0; t < seqs.size(); ++t) {
        auto entries = seqs.entries(t);
        for (size_t k = 0; k < entries.size(); ++k) {
            res.impacts.push_back(impact[entries[k]]);
            res.counts.push_back(static_cast<double>(entries.size() - k - 1));
        }
    }
    BinSpec spec;
    spec.kind = BinSpec::Kind::linear;
    spec.width = cfg.impact_bin_width;
    spec.min_samples = cfg.min_samples;
    res.series = make_series("subsequent_patents", res.impacts, res.counts, spec);
    if (res.impacts.empty()) {
        res.fit.degenerate_predictor = true;
    } else {
        res.fit = ols(res.impacts, res.counts);
    }
    return res;
}

SeriesResult prediction2_stay_series(const TeamSequences& seqs, const Dataset& ds,
                                     std::span<const double> impact,
                                     std::span<const HitAnchor> anchors,
                                     const AnalysisConfig& cfg) {
    (void)ds;
    std::vector<double> coords, values;
    for (const HitAnchor& a : anchors) {
        auto entries = seqs.entries(a.team);
        for (size_t k = a.pos; k < entries.size(); ++k) {
            coords.push_back(static_cast<double>(k - a.pos + 1));
            values.push_back(impact[entries[k]]);
        }
    }
    return make_series("no_switch", coords, values, dyadic_spec(cfg));
}

SeriesResult prediction3_switch_series(std::span<const SwitchEvent> events,
                                       std::span<const double> impact,
                                       const SeriesResult& stay, const AnalysisConfig& cfg) {
    std::vector<double> coords, values;
    for (const SwitchEvent& ev : events) {
        coords.push_back(static_cast<double>(ev.aligned_r));
        values.push_back(impact[ev.first_patent]);
    }
    SeriesResult out = make_series("switch_to_new_team", coords, values, dyadic_spec(cfg));
    out.tests = per_bin_tests(out, stay, cfg.min_samples);
    return out;
}

RhoSeries rho_series(const SeriesResult& stay, const SeriesResult& switch_,
                     uint64_t min_samples) {
    RhoSeries out;
    for (const BinStat& sb : switch_.binned.bins) {
        int64_t key = static_cast<int64_t>(std::llround(sb.label));
        if (!bin_visible(switch_, key, min_samples) || !bin_visible(stay, key, min_samples))
            continue;
        auto it = std::find_if(stay.binned.bins.begin(), stay.binned.bins.end(),
                               [&](const BinStat& b) { return b.label == sb.label; });
        if (it == stay.binned.bins.end()) continue;
        if (it->mean == 0) {
            out.notes.push_back("r=" + std::to_string(key) +
                                ": stay mean is zero, point omitted");
            continue;
        }
        RhoPoint pt;
        pt.r = key;
        pt.rho = sb.mean / it->mean;
        pt.n_switch = sb.n;
        pt.n_stay = it->n;
        out.points.push_back(pt);
    }
    return out;
}

SweepResult threshold_sweep(const TeamSequences& seqs, const Dataset& ds,
                            std::span<const double> impact,
                            std::span<const double> thresholds, const AnalysisConfig& cfg) {
    SweepResult out;
    for (double thr : thresholds) {
        AnalysisConfig tcfg = cfg;
        tcfg.hit = HitSpec{HitSpec::Mode::absolute, thr};
        tcfg.bound_cutoff = thr;
        auto anchors = find_hit_anchors(seqs, ds, impact, thr);
        ThresholdRho tr;
        tr.threshold = thr;
        tr.stay = prediction2_stay_series(seqs, ds, impact, anchors, tcfg);
        auto events = find_switch_events(anchors, seqs, ds);
        tr.switch_ = prediction3_switch_series(events, impact, tr.stay, tcfg);
        tr.rho = rho_series(tr.stay, tr.switch_, tcfg.min_samples);
        out.series.push_back(std::move(tr));
    }
    if (out.series.size() >= 2)
        out.tests = per_bin_tests(out.series.front().switch_, out.series.back().switch_,
                                  cfg.min_samples);
    return out;
}

namespace {

DiversityResult finish_diversity(std::vector<double>&& in_coords,
                                 std::vector<double>&& in_values,
                                 std::vector<double>&& ex_coords,
                                 std::vector<double>&& ex_values,
                                 const AnalysisConfig& cfg) {
    DiversityResult res;
    res.inex = make_series("inexperienced", in_coords, in_values, dyadic_spec(cfg));
    res.ex = make_series("experienced", ex_coords, ex_values, dyadic_spec(cfg));
    res.tests = per_bin_tests(res.inex, res.ex, cfg.min_samples);
    return res;
}

}  // namespace

DiversityResult tech_diversity(const TeamSequences& seqs, const Dataset& ds,
                               std::span<const double> impact, const AnalysisConfig& cfg) {
    std::vector<double> in_c, in_v, ex_c, ex_v;
    std::vector<ClassCode> history;
    for (size_t t = 0; t < seqs.size(); ++t) {
        auto entries = seqs.entries(t);
        history.clear();
        for (size_t k = 0; k < entries.size(); ++k) {
            auto classes = ds.classes_of(entries[k]);
            if (k == 0) {
                if (cfg.include_first_as_inex) {
                    in_c.push_back(1.0);
                    in_v.push_back(impact[entries[k]]);
                }
            } else {
                bool novel = std::any_of(classes.begin(), classes.end(), [&](ClassCode c) {
                    return !std::binary_search(history.begin(), history.end(), c);
                });
                (novel ? in_c : ex_c).push_back(static_cast<double>(k + 1));
                (novel ? in_v : ex_v).push_back(impact[entries[k]]);
            }
            for (ClassCode c : classes) {
                auto it = std::lower_bound(history.begin(), history.end(), c);
                if (it == history.end() || *it != c) history.insert(it, c);
            }
        }
    }
    return finish_diversity(std::move(in_c), std::move(in_v), std::move(ex_c), std::move(ex_v),
                            cfg);
}

DiversityResult pair_diversity(const PairSequences& seqs, const Dataset& ds,
                               std::span<const double> impact, const AnalysisConfig& cfg) {
    std::vector<double> in_c, in_v, ex_c, ex_v;
    std::set<std::vector<InventorId>> history;
    std::vector<InventorId> others;
    for (size_t s = 0; s < seqs.size(); ++s) {
        const PairKey key = seqs.keys[s];
        auto entries = seqs.entries(s);
        history.clear();
        for (size_t k = 0; k < entries.size(); ++k) {
            auto invs = ds.inventors_of(entries[k]);
            others.clear();
            for (InventorId m : invs)
                if (m != key.a && m != key.b) others.push_back(m);
            if (k == 0) {
                if (cfg.include_first_as_inex) {
                    in_c.push_back(1.0);
                    in_v.push_back(impact[entries[k]]);
                }
            } else {
                bool novel = !history.contains(others);
                (novel ? in_c : ex_c).push_back(static_cast<double>(k + 1));
                (novel ? in_v : ex_v).push_back(impact[entries[k]]);
            }
            history.insert(others);
        }
    }
    return finish_diversity(std::move(in_c), std::move(in_v), std::move(ex_c), std::move(ex_v),
                            cfg);
}

std::vector<TestPoint> compare_p1(const P1Result& a, const P1Result& b,
                                  const AnalysisConfig& cfg) {
    return per_bin_tests(a.series, b.series, cfg.min_samples);
}

}  // namespace collabline
