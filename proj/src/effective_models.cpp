#include "mzcg/effective_models.hpp"

#include <cmath>

#include "mzcg/error.hpp"

namespace mzcg {

std::string_view model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::MemoryCorrected: return "memory-corrected";
        case ModelKind::MemoryFree: return "memory-free";
        case ModelKind::NaiveMemory: return "naive-memory";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    for (auto kind : {ModelKind::MemoryCorrected, ModelKind::MemoryFree, ModelKind::NaiveMemory}) {
        if (model_name(kind) == name) return kind;
    }
    throw ConfigError("unknown model '" + std::string(name) +
                      "' (expected memory-corrected, memory-free or naive-memory)");
}

bool has_diffusion(ModelKind kind) { return kind != ModelKind::NaiveMemory; }

double drift(const EffectiveModel& model, double h) {
    const auto& p = model.params;
    const double c = std::cos(p.omega * h);
    const double tw2c2 = p.tau * p.tau * p.omega * p.omega * c * c;
    switch (model.kind) {
        case ModelKind::MemoryCorrected:
            return -p.mu * h / (1.0 + tw2c2);
        case ModelKind::MemoryFree:
            return -p.mu * h;
        case ModelKind::NaiveMemory:
            return (p.lambda * tw2c2 - 1.0) * p.mu * h +
                   (p.lambda / p.beta) * p.tau * p.tau * p.omega * p.omega * p.omega *
                       std::sin(2.0 * p.omega * h);
    }
    return 0.0;
}

double diffusion(const EffectiveModel& model, double h) {
    const auto& p = model.params;
    switch (model.kind) {
        case ModelKind::MemoryCorrected: {
            const double c = std::cos(p.omega * h);
            return std::sqrt(1.0 / (1.0 + p.tau * p.tau * p.omega * p.omega * c * c));
        }
        case ModelKind::MemoryFree:
            return 1.0;
        case ModelKind::NaiveMemory:
            break;
    }
    throw UnsupportedModel("naive-memory has no diffusion coefficient; run it without thermostat");
}

}  // namespace mzcg
