#pragma once

#include "biastrace/attack.hpp"
#include "biastrace/beliefs.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace biastrace {

struct Descriptive {
    double mean = 0.0;
    double sd = 0.0; // sample SD, n-1 denominator
    double median = 0.0;
    double pct_above = 0.0; // strict >, in percent
};

Descriptive describe(std::span<const double> values, double threshold = 0.5);

enum class Alternative { TwoSided, Greater, Less };

enum class ZeroPolicy { Drop, Pratt };

struct WilcoxonResult {
    double w = 0.0; // sum of positive-difference ranks
    double p = 1.0;
    std::string method; // "exact" | "normal-approx"
    std::size_t n_effective = 0;
};

// Signed-rank test on paired values (first - second ... differences are
// first minus second of each pair). Average ranks on ties. Exact p by full
// sign enumeration when n_effective <= exact_limit, else normal approximation
// with tie-corrected variance and continuity correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    Alternative alternative = Alternative::TwoSided,
                                    ZeroPolicy zeros = ZeroPolicy::Drop,
                                    std::size_t exact_limit = 20);

struct Chi2Result {
    double statistic = 0.0;
    int df = 1;
    double p = 1.0;
    std::array<std::int64_t, 4> counts{}; // k1, n1-k1, k2, n2-k2
};

// Pearson chi-square on the 2x2 table of two proportions; Yates correction
// off by default.
Chi2Result chi2_proportions(std::int64_t k1, std::int64_t n1, std::int64_t k2, std::int64_t n2,
                            bool yates = false);

struct TacticMeanRow {
    Tactic tactic = Tactic::Unknown;
    std::optional<double> mean_ambiguity;
    std::optional<double> mean_loss;
    std::size_t n_ambiguity = 0;
    std::size_t n_loss = 0;
};

// Grouped means in tactic enum order; tactics with no observations omitted.
std::vector<TacticMeanRow> per_tactic_means(std::span<const TraitObservation> observations);

struct Histogram {
    std::vector<double> edges;     // n_bins + 1
    std::vector<double> densities; // sum(density * width) == 1
};

// Uniform bins on [0,1], normalized to integrate to one.
Histogram histogram_density(std::span<const double> values, int n_bins = 50);

// Survival functions used by the tests above.
double normal_sf(double z);
double chi2_sf_1df(double x);

// Rank-based AUC of `positive` scoring above `negative` (ties count half).
double auc_mann_whitney(std::span<const double> positive, std::span<const double> negative);

} // namespace biastrace
