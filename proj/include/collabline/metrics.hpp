#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collabline/model.hpp"
#include "collabline/workspace.hpp"

namespace collabline {

// Normalized impact: citations / mean citations of the patent's cohort year.
// A cohort whose patents are all uncited gets impact 0 throughout (0/0 := 0).
ImpactTable compute_impact(const Dataset& ds);

// Binds a hit spec to a concrete impact cutoff. Quantile mode returns the
// smallest observed impact c such that the fraction of the population with
// I > c is <= q; absolute mode passes the threshold through. A patent is a
// hit iff I > c.
double bind_hit_threshold(const HitSpec& spec, std::span<const double> impacts);

struct LogNormalFit {
    double mu = 0;
    double sigma = 0;  // MLE, divisor n
    uint64_t n = 0;
    uint64_t excluded_nonpositive = 0;
    bool degenerate = false;  // all samples equal
};

LogNormalFit fit_lognormal(std::span<const double> samples);

struct CcdfSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (value, P(X >= value))
    std::optional<LogNormalFit> fit;
};

CcdfSeries ccdf(std::span<const double> samples, const std::string& label);

// Split-halves convention: midpoint = floor((min+max)/2), first half
// inclusive of the midpoint. An empty half is omitted.
struct SplitCcdf {
    std::vector<CcdfSeries> series;
    std::vector<std::string> warnings;
};
SplitCcdf ccdf_split_halves(std::span<const double> samples, std::span<const int32_t> years,
                            int32_t min_year, int32_t max_year, const std::string& label);

}  // namespace collabline
