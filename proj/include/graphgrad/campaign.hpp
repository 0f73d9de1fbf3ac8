#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "graphgrad/graph.hpp"
#include "graphgrad/operators.hpp"

namespace graphgrad {

/// mt19937_64 with platform-independent conversions to doubles and ranges,
/// so a seed reproduces the same stream everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Stream for (seed, index), decorrelated by a SplitMix64 mix.
    static Rng for_instance(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi);
    /// Uniform integer in [lo, hi].
    std::size_t index(std::size_t lo, std::size_t hi);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

enum class GraphFamily { Path, Cycle, Complete, Grid, ErdosRenyi, CustomFile };

struct ValueScheme {
    enum class Kind { Unit, Degree, LogUniform };
    Kind kind = Kind::Unit;
    double lo = 0.1;
    double hi = 10.0;
};

struct FamilySpec {
    GraphFamily kind = GraphFamily::ErdosRenyi;
    double p = 0.3;          // Erdos-Renyi edge probability
    std::string file;        // CustomFile source
};

struct CampaignConfig {
    std::uint64_t seed = 1;
    std::size_t n_graphs = 10;
    std::size_t n_min = 2;
    std::size_t n_max = 20;
    FamilySpec family;
    ValueScheme weights{ValueScheme::Kind::LogUniform, 0.1, 10.0};
    ValueScheme measure{ValueScheme::Kind::LogUniform, 0.1, 10.0};
    ValueScheme function{ValueScheme::Kind::LogUniform, 0.01, 100.0};
    double q_bound = 1.0;  // |q| <= q_bound for generated potentials
    std::vector<std::string> checks;
    std::map<std::string, double> tolerances;
    std::string output_path;
    std::size_t max_retries = 200;
};

/// Names accepted in CampaignConfig::checks.
const std::vector<std::string>& known_checks();
bool check_requires_connectivity(std::string_view name);

/// JSON mirroring CampaignConfig. Unknown checks are rejected.
CampaignConfig parse_campaign_config(std::string_view json_text);
std::string campaign_config_to_json(const CampaignConfig& cfg);

/// Graph of the configured family; n is ignored by CustomFile.
WeightedGraph random_graph(Rng& rng, const FamilySpec& family, std::size_t n, const ValueScheme& weights,
                           const ValueScheme& measure, bool require_connected, std::size_t max_retries = 200);

/// Values on each vertex drawn from the scheme (Degree is treated as Unit).
VertexFunction random_function(Rng& rng, std::size_t n, const ValueScheme& scheme);

/// Deterministic graph for (config.seed, index). Erdos-Renyi graphs are
/// redrawn until connected when any configured check needs connectivity,
/// and always until they have at least one edge.
WeightedGraph generate(const CampaignConfig& cfg, std::size_t index);

struct CheckAggregate {
    std::string name;
    std::size_t instances = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t errors = 0;
    double worst_violation = 0.0;
    double worst_slack = 0.0;
    std::string worst_witness_json;  // graph + functions + message, replayable
};

struct CampaignReport {
    std::vector<CheckAggregate> checks;
    std::string json;  // full report including config echo and timing
    bool all_passed() const;
};

/// Runs every configured check on every generated instance. Errors raised by
/// a check are recorded against that instance and the run continues. Writes
/// the JSON report to output_path when it is set.
CampaignReport run_campaign(const CampaignConfig& cfg);

}  // namespace graphgrad
