#pragma once

#include "biastrace/errors.hpp"
#include "biastrace/model_params.hpp"
#include "biastrace/options.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace biastrace {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Prospect-style subjective utility eps = p_success*G - lambda*p_detect*L.
// Unknown probabilities must be resolved upstream; reaching this with one is
// a contract violation.
inline double subjective_utility(const OptionFeature& o, double lambda) {
    if (!o.p_success || !o.p_detect) {
        throw DataError("subjective_utility: unknown probability for option '" + o.option_id +
                        "'");
    }
    return *o.p_success * o.gain - lambda * *o.p_detect * o.loss;
}

// Same utility with unknown probabilities replaced by the ambiguity-neutral
// reference 0.5.
inline double resolved_utility(const OptionFeature& o, double lambda) {
    const double ps = o.p_success.value_or(0.5);
    const double pd = o.p_detect.value_or(0.5);
    return ps * o.gain - lambda * pd * o.loss;
}

// Probability of picking the aggressive option: logistic(mu*(eps_a - eps_s)).
inline double gamma_choice(double eps_a, double eps_s, double mu) {
    if (!(mu > 0.0)) throw DataError("gamma_choice: mu must be > 0");
    return logistic(mu * (eps_a - eps_s));
}

// exp(-k*n): 1 for never-used, decaying with experience.
inline double novelty_score(std::int64_t n_prior_uses, double k) {
    if (n_prior_uses < 0) throw DataError("novelty_score: negative count");
    return std::exp(-k * static_cast<double>(n_prior_uses));
}

// 12 * Var(Beta(s+1, n-s+1)); the factor normalizes the n=0 case to 1.
inline double epistemic_uncertainty(std::int64_t n_uses, std::int64_t n_successes) {
    if (n_uses < 0 || n_successes < 0 || n_successes > n_uses) {
        throw DataError("epistemic_uncertainty: invalid counts");
    }
    const double a = static_cast<double>(n_successes) + 1.0;
    const double b = static_cast<double>(n_uses - n_successes) + 1.0;
    const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    return 12.0 * var;
}

// Weighted blend of novelty, complexity, and historical variance, in [0,1].
inline double ambiguity_score(const OptionFeature& o, const ModelParams& p) {
    const double a = p.weight_novelty * o.novelty + p.weight_complexity * o.complexity +
                     p.weight_variance * epistemic_uncertainty(o.history.n_uses,
                                                               o.history.n_successes);
    return std::clamp(a, 0.0, 1.0);
}

// SEU benchmark for ambiguity-neutral behavior: lambda = 1, unknowns -> 0.5.
inline double seu_reference(const OptionFeature& o) { return resolved_utility(o, 1.0); }

} // namespace biastrace
