#pragma once

#include <optional>
#include <string>

#include "queasylab/complexity.hpp"

namespace queasylab {

/// Per-instance complexity report, one JSON object per instance.
struct ComplexityReport {
    BitString instance;
    std::string language;
    UniverseSpec universe;
    std::uint64_t step_budget = 0;
    int max_program_len = 0;
    ComplexityValue c, cd, ic;
    std::optional<ComplexityValue> qc, qcd, qic;  // present when quantum was requested
    std::optional<double> epsilon;

    bool all_censored() const;
};

/// Deterministic JSON serialization (stable key order, two-space indent).
std::string report_to_json(const ComplexityReport& report);

}  // namespace queasylab
