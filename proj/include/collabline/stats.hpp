#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace collabline {

struct OlsResult {
    double slope = 0;
    double intercept = 0;
    double slope_p = 1;  // two-sided
    uint64_t n = 0;
    bool perfect_fit = false;
    bool degenerate_predictor = false;
};

// Closed-form least squares of y on x; slope p from the two-sided t-test with
// n-2 degrees of freedom. Requires n >= 3 and var(x) > 0; otherwise the
// degenerate_predictor flag is set.
OlsResult ols(std::span<const double> x, std::span<const double> y);

struct RankSumResult {
    double u_statistic = 0;  // U of the "greater" sample
    double z = 0;
    double p_one_sided = 1;
    uint64_t n1 = 0, n2 = 0;
    bool all_ties = false;
    bool exact = false;  // small-sample exact path was used
    std::string direction = "greater>lesser";
};

// One-sided Mann-Whitney / Wilcoxon rank-sum test of greater being
// stochastically larger than lesser. Midranks for ties; small tieless samples
// use the exact U distribution, larger ones a continuity-corrected normal
// approximation with tie-corrected variance and an Edgeworth tail term.
RankSumResult rank_sum_one_sided(std::span<const double> greater,
                                 std::span<const double> lesser);

struct BinSpec {
    enum class Kind { repetition_dyadic, linear };
    Kind kind = Kind::repetition_dyadic;
    double width = 1.0;         // linear only
    uint64_t min_samples = 100;  // bins below this are suppressed from output
};

struct BinStat {
    double label = 0;  // dyadic: r or upper edge; linear: lower edge
    double mean = 0;
    double se = 0;
    uint64_t n = 0;
    bool single_sample = false;
    bool suppressed = false;  // n < min_samples
};

struct BinnedSeries {
    std::vector<BinStat> bins;  // ascending by label, including suppressed bins
    uint64_t total_n = 0;

    std::vector<BinStat> visible() const;
};

// Dyadic repetition binning: r = 1..8 individually, then (8,16], (16,32], ...
// labeled by the upper edge.
int64_t dyadic_bin_label(int64_t r);

BinnedSeries bin_series(std::span<const double> coords, std::span<const double> values,
                        const BinSpec& spec);

// Probability helpers shared by the tests above.
double normal_sf(double z);                      // P(Z >= z)
double students_t_sf(double t, double dof);      // P(T >= t)
double incomplete_beta(double a, double b, double x);  // regularized I_x(a,b)

}  // namespace collabline
