#pragma once

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <vector>

namespace biastrace {

// Knobs of both bias models. Every value is config-overridable and the
// resolved set is embedded in analysis reports.
struct ModelParams {
    double mu = 1.0; // choice sharpness in the logistic choice rule

    // Loss-aversion grid posterior over lambda.
    int lambda_grid_size = 21;
    double lambda_min = 0.5;
    double lambda_max = 3.0;
    double lambda_threshold = 1.0; // trait probability = mass on lambda > threshold

    // Comparative-ignorance gate.
    double gate_delta = 0.3;       // min ambiguity spread between extremes
    double gate_uncertainty = 0.5; // min mean context ambiguity

    // Ambiguity score weights (sum to 1).
    double weight_novelty = 0.4;
    double weight_complexity = 0.3;
    double weight_variance = 0.3;

    double novelty_decay = 0.5;  // k in exp(-k * n)
    double evidence_slope = 2.0; // kappa in the evidence scaling logistic

    // Ambiguity-aversion Beta prior.
    double ambiguity_alpha0 = 1.0;
    double ambiguity_beta0 = 3.0;

    // Hedging signature.
    double hedging_window_s = 600.0;
    double hedging_evidence = 0.15;
    double hedging_high = 0.7;
    double hedging_low = 0.3;
    int hedging_min_alternations = 2;

    std::vector<double> lambda_grid() const;

    void validate() const; // throws DataError

    nlohmann::json to_json() const;
    static ModelParams from_json(const nlohmann::json& j);
    // Missing file -> defaults; present file overrides listed fields only.
    static ModelParams load(const std::filesystem::path& path);
};

} // namespace biastrace
