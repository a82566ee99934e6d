#include "collabline/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "collabline/model.hpp"
#include "collabline/par.hpp"

namespace collabline {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

// Continued fraction for the regularized incomplete beta (Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14, kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double students_t_sf(double t, double dof) {
    if (t < 0) return 1.0 - students_t_sf(-t, dof);
    double x = dof / (dof + t * t);
    return 0.5 * incomplete_beta(dof / 2.0, 0.5, x);
}

OlsResult ols(std::span<const double> x, std::span<const double> y) {
    OlsResult res;
    res.n = x.size();
    if (x.size() != y.size()) throw DataError("ols: mismatched sample sizes");
    if (res.n < 3) {
        res.degenerate_predictor = true;
        return res;
    }
    const double n = static_cast<double>(res.n);
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) {
        res.degenerate_predictor = true;
        return res;
    }
    res.slope = sxy / sxx;
    res.intercept = my - res.slope * mx;
    double ss_res = syy - res.slope * sxy;
    if (ss_res <= 1e-12 * std::max(syy, 1.0)) {
        res.perfect_fit = true;
        res.slope_p = 0.0;
        return res;
    }
    double s2 = ss_res / (n - 2.0);
    double se = std::sqrt(s2 / sxx);
    double t = res.slope / se;
    res.slope_p = 2.0 * students_t_sf(std::fabs(t), n - 2.0);
    return res;
}

namespace {

// Exact permutation tail P(R1 >= r1_obs) for small pooled samples, ties
// included: subset-count DP over doubled midranks (always integers). Counts
// stay below 2^53 for N <= 30, so doubles hold them exactly.
double exact_ranksum_sf(const std::vector<int64_t>& dranks, size_t n1, int64_t r1x2) {
    int64_t total = 0;
    for (int64_t v : dranks) total += v;
    std::vector<std::vector<double>> dp(n1 + 1,
                                        std::vector<double>(static_cast<size_t>(total) + 1, 0.0));
    dp[0][0] = 1.0;
    for (int64_t v : dranks)
        for (size_t k = n1; k >= 1; --k)
            for (int64_t s = total; s >= v; --s)
                dp[k][static_cast<size_t>(s)] += dp[k - 1][static_cast<size_t>(s - v)];
    double all = 0, tail = 0;
    for (int64_t s = 0; s <= total; ++s) {
        all += dp[n1][static_cast<size_t>(s)];
        if (s >= r1x2) tail += dp[n1][static_cast<size_t>(s)];
    }
    return tail / all;
}

// Fourth central moment of U without ties (exact closed form).
double u_mu4(double m, double n) {
    double N = m + n;
    return m * n * (N + 1.0) / 720.0 *
           (15.0 * m * n * N + 5.0 * m * n + 2.0 * N * N - 6.0 * N -
            8.0 * (m * m + n * n));
}

}  // namespace

RankSumResult rank_sum_one_sided(std::span<const double> greater,
                                 std::span<const double> lesser) {
    RankSumResult res;
    res.n1 = greater.size();
    res.n2 = lesser.size();
    if (res.n1 == 0 || res.n2 == 0)
        throw InsufficientDataError("rank_sum: both samples must be nonempty");

    const size_t N = res.n1 + res.n2;
    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(N);
    for (double v : greater) pooled.emplace_back(v, 0);
    for (double v : lesser) pooled.emplace_back(v, 1);
    std::sort(pooled.begin(), pooled.end());

    // Midranks; accumulate rank sum of the "greater" sample and tie sizes.
    // Doubled midranks are integers and feed the exact small-sample path.
    double r1 = 0;
    int64_t r1x2 = 0;
    std::vector<int64_t> dranks(N, 0);
    double tiesum = 0;  // sum of t^3 - t over tie groups
    bool any_tie = false;
    size_t i = 0;
    while (i < N) {
        size_t j = i;
        while (j < N && pooled[j].first == pooled[i].first) ++j;
        double t = static_cast<double>(j - i);
        if (j - i > 1) {
            any_tie = true;
            tiesum += t * t * t - t;
        }
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        int64_t dmid = static_cast<int64_t>(i + 1 + j);
        for (size_t k = i; k < j; ++k) {
            dranks[k] = dmid;
            if (pooled[k].second == 0) {
                r1 += midrank;
                r1x2 += dmid;
            }
        }
        i = j;
    }

    const double n1 = static_cast<double>(res.n1), n2 = static_cast<double>(res.n2);
    res.u_statistic = r1 - n1 * (n1 + 1.0) / 2.0;
    const double mean = n1 * n2 / 2.0;
    const double nn = static_cast<double>(N);
    double var = n1 * n2 / 12.0 * ((nn + 1.0) - tiesum / (nn * (nn - 1.0)));

    if (var <= 0) {
        res.all_ties = true;
        res.z = 0;
        res.p_one_sided = 0.5;
        return res;
    }

    if (N <= 30) {
        res.exact = true;
        res.z = (res.u_statistic - mean) / std::sqrt(var);
        res.p_one_sided = exact_ranksum_sf(dranks, res.n1, r1x2);
        return res;
    }

    res.z = (res.u_statistic - mean - 0.5) / std::sqrt(var);
    double p = normal_sf(res.z);
    if (!any_tie) {
        // Edgeworth tail term from the exact kurtosis of U.
        double g2 = u_mu4(n1, n2) / (var * var) - 3.0;
        double phi = std::exp(-res.z * res.z / 2.0) / std::sqrt(2.0 * M_PI);
        p += phi * (g2 / 24.0) * (res.z * res.z * res.z - 3.0 * res.z);
    }
    res.p_one_sided = std::clamp(p, 0.0, 1.0);
    return res;
}

int64_t dyadic_bin_label(int64_t r) {
    if (r <= 8) return r;
    int64_t edge = 16;
    while (edge < r) edge *= 2;
    return edge;
}

std::vector<BinStat> BinnedSeries::visible() const {
    std::vector<BinStat> out;
    for (const auto& b : bins)
        if (!b.suppressed) out.push_back(b);
    return out;
}

BinnedSeries bin_series(std::span<const double> coords, std::span<const double> values,
                        const BinSpec& spec) {
    if (coords.size() != values.size()) throw DataError("bin_series: mismatched inputs");
    struct Acc {
        uint64_t n = 0;
        double sum = 0, sumsq = 0;
    };
    const size_t nb = num_blocks(coords.size());
    std::vector<std::map<int64_t, Acc>> partials(nb);
    for_each_block(coords.size(), [&](size_t b, size_t begin, size_t end) {
        auto& local = partials[b];
        for (size_t k = begin; k < end; ++k) {
            int64_t key;
            if (spec.kind == BinSpec::Kind::repetition_dyadic) {
                key = dyadic_bin_label(static_cast<int64_t>(std::llround(coords[k])));
            } else {
                key = static_cast<int64_t>(std::floor(coords[k] / spec.width));
            }
            Acc& a = local[key];
            ++a.n;
            a.sum += values[k];
            a.sumsq += values[k] * values[k];
        }
    });

    // Merge in block order so sums are identical for any thread count.
    std::map<int64_t, Acc> merged;
    for (auto& local : partials)
        for (auto& [key, a] : local) {
            Acc& m = merged[key];
            m.n += a.n;
            m.sum += a.sum;
            m.sumsq += a.sumsq;
        }

    BinnedSeries out;
    for (auto& [key, a] : merged) {
        BinStat bs;
        bs.label = spec.kind == BinSpec::Kind::repetition_dyadic
                       ? static_cast<double>(key)
                       : static_cast<double>(key) * spec.width;
        bs.n = a.n;
        bs.mean = a.sum / static_cast<double>(a.n);
        if (a.n >= 2) {
            double var = (a.sumsq - static_cast<double>(a.n) * bs.mean * bs.mean) /
                         static_cast<double>(a.n - 1);
            bs.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(a.n));
        } else {
            bs.se = 0;
            bs.single_sample = true;
        }
        bs.suppressed = a.n < spec.min_samples;
        out.total_n += a.n;
        out.bins.push_back(bs);
    }
    return out;
}

}  // namespace collabline
