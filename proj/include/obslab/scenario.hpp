#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "obslab/system.hpp"

namespace obslab {

// Serializable description of a SpectralSystem.  Exactly one of the
// per-mode obs lists (output_dim >= 1) or the system-level cgram
// (output_dim == 0) is present.
struct Scenario {
    struct Mode {
        double re = 0.0;
        double im = 0.0;
        std::vector<std::array<double, 2>> obs; // [re, im] pairs, length output_dim
    };

    std::string label;
    int output_dim = 0; // 0 means C-Gram form
    std::vector<Mode> modes;
    std::optional<std::vector<std::vector<std::array<double, 2>>>> cgram;
    std::optional<SystemMetadata> metadata;
};

// Built-in demo families.
//   wave:          λ = -inπ for n in ±{1..N} (order 1,-1,2,-2,...), scalar
//                  observation -i per mode, strip-bounded spectrum.
//   schrodinger1d: λ = i(nπ)², C-Gram diag(n²π²), strip-bounded spectrum.
//   heat1d:        λ = (nπ)², C-Gram diag(n²π²), unbounded real spectrum,
//                  compact resolvent.
Scenario build_demo(const std::string& name, int N);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);

// Schema-checks the scenario and assembles the in-memory system.
SpectralSystem to_system(const Scenario& scenario);

// build_demo + to_system + validate_system in one step.
ValidatedSystem demo_system(const std::string& name, int N);

} // namespace obslab
