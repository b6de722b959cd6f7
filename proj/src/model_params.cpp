#include "biastrace/model_params.hpp"

#include "biastrace/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

using nlohmann::json;

namespace biastrace {

std::vector<double> ModelParams::lambda_grid() const {
    std::vector<double> grid(static_cast<std::size_t>(lambda_grid_size));
    if (lambda_grid_size == 1) {
        grid[0] = lambda_min;
        return grid;
    }
    const double step = (lambda_max - lambda_min) / (lambda_grid_size - 1);
    for (int i = 0; i < lambda_grid_size; ++i) {
        grid[static_cast<std::size_t>(i)] = lambda_min + step * i;
    }
    return grid;
}

void ModelParams::validate() const {
    if (!(mu > 0.0)) throw DataError("params: mu must be > 0");
    if (lambda_grid_size < 1) throw DataError("params: lambda_grid_size must be >= 1");
    if (lambda_min > lambda_max) throw DataError("params: lambda_min > lambda_max");
    const double wsum = weight_novelty + weight_complexity + weight_variance;
    if (weight_novelty < 0 || weight_complexity < 0 || weight_variance < 0 ||
        std::abs(wsum - 1.0) > 1e-9) {
        throw DataError("params: ambiguity weights must be non-negative and sum to 1");
    }
    for (double t : {gate_delta, gate_uncertainty, hedging_high, hedging_low}) {
        if (t < 0.0 || t > 1.0) throw DataError("params: thresholds must be in [0,1]");
    }
    if (!(novelty_decay >= 0.0)) throw DataError("params: novelty_decay must be >= 0");
    if (!(ambiguity_alpha0 > 0.0) || !(ambiguity_beta0 > 0.0)) {
        throw DataError("params: ambiguity prior must be positive");
    }
    if (!(hedging_window_s > 0.0)) throw DataError("params: hedging_window_s must be > 0");
    if (hedging_evidence < 0.0) throw DataError("params: hedging_evidence must be >= 0");
}

json ModelParams::to_json() const {
    return json{
        {"mu", mu},
        {"lambda_grid_size", lambda_grid_size},
        {"lambda_min", lambda_min},
        {"lambda_max", lambda_max},
        {"lambda_threshold", lambda_threshold},
        {"gate_delta", gate_delta},
        {"gate_uncertainty", gate_uncertainty},
        {"weight_novelty", weight_novelty},
        {"weight_complexity", weight_complexity},
        {"weight_variance", weight_variance},
        {"novelty_decay", novelty_decay},
        {"evidence_slope", evidence_slope},
        {"ambiguity_alpha0", ambiguity_alpha0},
        {"ambiguity_beta0", ambiguity_beta0},
        {"hedging_window_s", hedging_window_s},
        {"hedging_evidence", hedging_evidence},
        {"hedging_high", hedging_high},
        {"hedging_low", hedging_low},
        {"hedging_min_alternations", hedging_min_alternations},
    };
}

ModelParams ModelParams::from_json(const json& j) {
    ModelParams p;
    if (!j.is_object()) throw DataError("params: expected a JSON object");
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("mu", p.mu);
    get("lambda_grid_size", p.lambda_grid_size);
    get("lambda_min", p.lambda_min);
    get("lambda_max", p.lambda_max);
    get("lambda_threshold", p.lambda_threshold);
    get("gate_delta", p.gate_delta);
    get("gate_uncertainty", p.gate_uncertainty);
    get("weight_novelty", p.weight_novelty);
    get("weight_complexity", p.weight_complexity);
    get("weight_variance", p.weight_variance);
    get("novelty_decay", p.novelty_decay);
    get("evidence_slope", p.evidence_slope);
    get("ambiguity_alpha0", p.ambiguity_alpha0);
    get("ambiguity_beta0", p.ambiguity_beta0);
    get("hedging_window_s", p.hedging_window_s);
    get("hedging_evidence", p.hedging_evidence);
    get("hedging_high", p.hedging_high);
    get("hedging_low", p.hedging_low);
    get("hedging_min_alternations", p.hedging_min_alternations);
    p.validate();
    return p;
}

ModelParams ModelParams::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read params: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("params " + path.string() + ": invalid JSON");
    return from_json(j);
}

} // namespace biastrace
