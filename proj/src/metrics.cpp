#include "collabline/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "collabline/par.hpp"

namespace collabline {

ImpactTable compute_impact(const Dataset& ds) {
    const size_t n = ds.n_patents();
    ImpactTable tbl;
    tbl.impact.assign(n, 0.0);
    if (n == 0) return tbl;

    // Per-cohort citation totals via fixed-block partials (bit-stable for any
    // thread count).
    struct Acc {
        double sum = 0;
        uint64_t count = 0;
    };
    const size_t nb = num_blocks(n);
    std::vector<std::map<int32_t, Acc>> partials(nb);
    for_each_block(n, [&](size_t b, size_t begin, size_t end) {
        auto& local = partials[b];
        for (size_t p = begin; p < end; ++p) {
            Acc& a = local[ds.cohort_year(static_cast<PatentIdx>(p))];
            a.sum += static_cast<double>(ds.citation_count[p]);
            ++a.count;
        }
    });
    std::map<int32_t, Acc> cohorts;
    for (auto& local : partials)
        for (auto& [year, a] : local) {
            Acc& m = cohorts[year];
            m.sum += a.sum;
            m.count += a.count;
        }
    for (auto& [year, a] : cohorts) {
        tbl.cohort_means[year] = a.sum / static_cast<double>(a.count);
        tbl.cohort_counts[year] = a.count;
    }

#pragma omp parallel for schedule(static)
    for (int64_t p = 0; p < static_cast<int64_t>(n); ++p) {
        double mean = tbl.cohort_means.at(ds.cohort_year(static_cast<PatentIdx>(p)));
        tbl.impact[p] = mean > 0 ? static_cast<double>(ds.citation_count[p]) / mean : 0.0;
    }
    return tbl;
}

double bind_hit_threshold(const HitSpec& spec, std::span<const double> impacts) {
    if (spec.mode == HitSpec::Mode::absolute) return spec.value;
    if (impacts.empty()) throw EmptyDatasetError("cannot bind hit quantile to empty impact set");
    std::vector<double> sorted(impacts.begin(), impacts.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    // Smallest observed c with frac(I > c) <= q; frac is non-increasing in c.
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        double c = sorted[i];
        size_t greater = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), c);
        if (static_cast<double>(greater) / n <= spec.value) return c;
    }
    return sorted.back();
}

LogNormalFit fit_lognormal(std::span<const double> samples) {
    LogNormalFit fit;
    std::vector<double> logs;
    logs.reserve(samples.size());
    for (double v : samples) {
        if (v > 0)
            logs.push_back(std::log(v));
        else
            ++fit.excluded_nonpositive;
    }
    fit.n = logs.size();
    if (logs.size() < 2)
        throw InsufficientDataError("fit_lognormal: need >= 2 positive samples, got " +
                                    std::to_string(logs.size()));
    double mu = 0;
    for (double l : logs) mu += l;
    mu /= static_cast<double>(logs.size());
    double ss = 0;
    for (double l : logs) ss += (l - mu) * (l - mu);
    fit.mu = mu;
    fit.sigma = std::sqrt(ss / static_cast<double>(logs.size()));
    fit.degenerate = fit.sigma == 0.0;
    return fit;
}

CcdfSeries ccdf(std::span<const double> samples, const std::string& label) {
    if (samples.empty()) throw EmptyDatasetError("ccdf: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    CcdfSeries out;
    out.label = label;
    const double n = static_cast<double>(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        out.points.emplace_back(sorted[i], static_cast<double>(sorted.size() - i) / n);
    }
    return out;
}

SplitCcdf ccdf_split_halves(std::span<const double> samples, std::span<const int32_t> years,
                            int32_t min_year, int32_t max_year, const std::string& label) {
    if (samples.size() != years.size()) throw DataError("ccdf_split_halves: mismatched inputs");
    const int32_t mid = static_cast<int32_t>(
        std::floor((static_cast<double>(min_year) + static_cast<double>(max_year)) / 2.0));
    std::vector<double> first, second;
    for (size_t i = 0; i < samples.size(); ++i)
        (years[i] <= mid ? first : second).push_back(samples[i]);

    SplitCcdf out;
    auto range_label = [&](int32_t a, int32_t b) {
        return label + " " + std::to_string(a) + "-" + std::to_string(b);
    };
    if (!first.empty())
        out.series.push_back(ccdf(first, range_label(min_year, mid)));
    else
        out.warnings.push_back("first half (" + range_label(min_year, mid) + ") is empty");
    if (!second.empty())
        out.series.push_back(ccdf(second, range_label(mid + 1, max_year)));
    else
        out.warnings.push_back("second half (" + range_label(mid + 1, max_year) + ") is empty");
    return out;
}

}  // namespace collabline
