#pragma once

#include <string>
#include <string_view>

#include "mzcg/benchmark_model.hpp"

namespace mzcg {

enum class ModelKind {
    MemoryCorrected,  // steepest-descent memory closure with fluctuation-dissipation noise
    MemoryFree,       // effective-potential gradient flow only
    NaiveMemory,      // delta-in-time memory from the unpropagated force covariance
};

// CLI identifiers: "memory-corrected", "memory-free", "naive-memory".
std::string_view model_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);  // throws ConfigError

struct EffectiveModel {
    ModelKind kind;
    BenchmarkParams params;
};

double drift(const EffectiveModel& model, double h);

// Multiplier sigma(h) on sqrt(2 dt / beta) xi. Throws UnsupportedModel for
// NaiveMemory, which has no noise closure.
double diffusion(const EffectiveModel& model, double h);

bool has_diffusion(ModelKind kind);

}  // namespace mzcg
