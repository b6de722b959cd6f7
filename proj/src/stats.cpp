#include "biastrace/stats.hpp"

#include "biastrace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace biastrace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double chi2_sf_1df(double x) {
    if (x <= 0.0) return 1.0;
    return std::erfc(std::sqrt(x / 2.0));
}

Descriptive describe(std::span<const double> values, double threshold) {
    if (values.empty()) throw DataError("describe: empty input");
    const double n = static_cast<double>(values.size());

    Descriptive d;
    d.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;

    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - d.mean) * (v - d.mean);
        d.sd = std::sqrt(ss / (n - 1.0));
    }

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    d.median = sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;

    const auto above = std::count_if(values.begin(), values.end(),
                                     [&](double v) { return v > threshold; });
    d.pct_above = 100.0 * static_cast<double>(above) / n;
    return d;
}

namespace {

struct RankedDiff {
    double diff = 0.0;
    double rank = 0.0;   // average rank
    long doubled = 0;    // 2 * rank, always integral
};

// Average ranks over |diff|; zeros participate in the ranking only under
// Pratt, and are excluded from the returned set either way.
std::vector<RankedDiff> rank_differences(std::span<const std::pair<double, double>> pairs,
                                         ZeroPolicy zeros) {
    std::vector<double> diffs;
    diffs.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        const double d = a - b;
        if (d != 0.0 || zeros == ZeroPolicy::Pratt) diffs.push_back(d);
    }
    std::vector<std::size_t> order(diffs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(diffs[i]) < std::abs(diffs[j]);
    });

    std::vector<RankedDiff> ranked;
    ranked.reserve(diffs.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() &&
               std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) {
            ++j;
        }
        // Tied block spans ranks i+1 .. j+1; doubled average = (i+1) + (j+1).
        const long doubled = static_cast<long>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) {
            const double d = diffs[order[k]];
            if (d != 0.0) {
                ranked.push_back({d, static_cast<double>(doubled) / 2.0, doubled});
            }
        }
        i = j + 1;
    }
    return ranked;
}

double exact_tail(const std::vector<RankedDiff>& ranked, long w_doubled, bool upper) {
    long max_sum = 0;
    for (const auto& r : ranked) max_sum += r.doubled;

    // Counts of sign assignments by doubled positive-rank sum.
    std::vector<double> counts(static_cast<std::size_t>(max_sum) + 1, 0.0);
    counts[0] = 1.0;
    long reached = 0;
    for (const auto& r : ranked) {
        reached += r.doubled;
        for (long s = reached; s >= r.doubled; --s) {
            counts[static_cast<std::size_t>(s)] +=
                counts[static_cast<std::size_t>(s - r.doubled)];
        }
    }

    double tail = 0.0;
    if (upper) {
        for (long s = std::max(w_doubled, 0L); s <= max_sum; ++s) {
            tail += counts[static_cast<std::size_t>(s)];
        }
    } else {
        for (long s = 0; s <= std::min(w_doubled, max_sum); ++s) {
            tail += counts[static_cast<std::size_t>(s)];
        }
    }
    return tail / std::pow(2.0, static_cast<double>(ranked.size()));
}

} // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    Alternative alternative, ZeroPolicy zeros,
                                    std::size_t exact_limit) {
    const std::vector<RankedDiff> ranked = rank_differences(pairs, zeros);
    if (ranked.empty()) throw DataError("degenerate paired sample: all differences zero");

    WilcoxonResult result;
    result.n_effective = ranked.size();

    long w_doubled = 0;
    for (const auto& r : ranked) {
        if (r.diff > 0.0) w_doubled += r.doubled;
    }
    result.w = static_cast<double>(w_doubled) / 2.0;

    double p_ge = 0.0, p_le = 0.0;
    if (ranked.size() <= exact_limit) {
        result.method = "exact";
        p_ge = exact_tail(ranked, w_doubled, true);
        p_le = exact_tail(ranked, w_doubled, false);
    } else {
        result.method = "normal-approx";
        // Under the null each rank joins W with probability 1/2, so
        // mean = sum(r)/2 and var = sum(r^2)/4; average ranks make this the
        // tie-corrected variance automatically.
        double mean = 0.0, var = 0.0;
        for (const auto& r : ranked) {
            mean += r.rank / 2.0;
            var += r.rank * r.rank / 4.0;
        }
        const double sd = std::sqrt(var);
        p_ge = normal_sf((result.w - mean - 0.5) / sd);
        p_le = 1.0 - normal_sf((result.w - mean + 0.5) / sd);
    }

    switch (alternative) {
        case Alternative::Greater: result.p = p_ge; break;
        case Alternative::Less: result.p = p_le; break;
        case Alternative::TwoSided: result.p = std::min(1.0, 2.0 * std::min(p_ge, p_le)); break;
    }
    return result;
}

Chi2Result chi2_proportions(std::int64_t k1, std::int64_t n1, std::int64_t k2, std::int64_t n2,
                            bool yates) {
    if (n1 <= 0 || n2 <= 0) throw DataError("chi2: group sizes must be positive");
    if (k1 < 0 || k2 < 0 || k1 > n1 || k2 > n2) throw DataError("chi2: counts out of range");

    const double observed[4] = {static_cast<double>(k1), static_cast<double>(n1 - k1),
                                static_cast<double>(k2), static_cast<double>(n2 - k2)};
    const double col1 = observed[0] + observed[2];
    const double col2 = observed[1] + observed[3];
    const double total = col1 + col2;
    if (col1 == 0.0) {
        throw DataError("chi2: degenerate margin: zero successes in both groups");
    }
    if (col2 == 0.0) {
        throw DataError("chi2: degenerate margin: zero failures in both groups");
    }

    const double rows[2] = {static_cast<double>(n1), static_cast<double>(n2)};
    const double cols[2] = {col1, col2};

    Chi2Result result;
    result.counts = {k1, n1 - k1, k2, n2 - k2};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const double expected = rows[r] * cols[c] / total;
            double dev = std::abs(observed[r * 2 + c] - expected);
            if (yates) dev = std::max(0.0, dev - 0.5);
            result.statistic += dev * dev / expected;
        }
    }
    result.df = 1;
    result.p = chi2_sf_1df(result.statistic);
    return result;
}

std::vector<TacticMeanRow> per_tactic_means(std::span<const TraitObservation> observations) {
    struct Acc {
        double sum_a = 0.0, sum_l = 0.0;
        std::size_t n_a = 0, n_l = 0;
    };
    std::array<Acc, kTacticCount> acc{};
    for (const auto& o : observations) {
        auto& a = acc[static_cast<std::size_t>(o.tactic)];
        if (o.model == TraitModel::Ambiguity) {
            a.sum_a += o.trait_probability;
            ++a.n_a;
        } else {
            a.sum_l += o.trait_probability;
            ++a.n_l;
        }
    }

    std::vector<TacticMeanRow> rows;
    for (int t = 0; t < kTacticCount; ++t) {
        const auto& a = acc[static_cast<std::size_t>(t)];
        if (a.n_a == 0 && a.n_l == 0) continue;
        TacticMeanRow row;
        row.tactic = static_cast<Tactic>(t);
        if (a.n_a > 0) row.mean_ambiguity = a.sum_a / static_cast<double>(a.n_a);
        if (a.n_l > 0) row.mean_loss = a.sum_l / static_cast<double>(a.n_l);
        row.n_ambiguity = a.n_a;
        row.n_loss = a.n_l;
        rows.push_back(row);
    }
    return rows;
}

Histogram histogram_density(std::span<const double> values, int n_bins) {
    if (values.empty()) throw DataError("histogram: empty input");
    if (n_bins < 1) throw DataError("histogram: n_bins must be >= 1");

    Histogram h;
    h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i) {
        h.edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / n_bins;
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_bins), 0);
    for (double v : values) {
        if (v < 0.0 || v > 1.0) throw DataError("histogram: value out of [0,1]");
        auto bin = static_cast<std::size_t>(std::min(
            static_cast<int>(v * n_bins), n_bins - 1));
        ++counts[bin];
    }
    const double width = 1.0 / n_bins;
    h.densities.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        h.densities[i] = static_cast<double>(counts[i]) /
                         (static_cast<double>(values.size()) * width);
    }
    return h;
}

double auc_mann_whitney(std::span<const double> positive, std::span<const double> negative) {
    if (positive.empty() || negative.empty()) throw DataError("auc: empty group");
    double score = 0.0;
    for (double p : positive) {
        for (double n : negative) {
            if (p > n) {
                score += 1.0;
            } else if (p == n) {
                score += 0.5;
            }
        }
    }
    return score / (static_cast<double>(positive.size()) * static_cast<double>(negative.size()));
}

} // namespace biastrace
