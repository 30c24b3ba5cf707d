#pragma once

#include <cstdint>
#include <vector>

#include "queasylab/problems.hpp"

namespace queasylab {

/// A FACTOR-PREFIX instance compiled to CNF. The formula is satisfiable iff
/// x = p*q for some p, q >= 2 where the minimal binary representation of p
/// starts with a. This is a deliberate relaxation of the largest-prime-factor
/// language: it keeps the reduction 1-1, poly-time and poly-time invertible
/// at tractable formula sizes, while primality and maximality constraints
/// stay out of the encoding.
struct ReductionArtifact {
    CnfFormula formula;
    FacInstance source;
    int p_width = 0;  // bit width of each multiplicand
    int q_width = 0;
    int semantic_variable_count = 0;  // everything below the tag block

    /// Reads the multiplicands out of a satisfying assignment.
    std::pair<std::uint64_t, std::uint64_t> extract_factors(const std::vector<bool>& model) const;
};

/// Builds the tagged multiplier formula. Requires 4 <= x <= 2^20 checkable
/// by verify_reduction; larger x up to 2^40 are accepted unchecked.
ReductionArtifact reduce_to_sat(const FacInstance& z);

/// Recovers the source instance from the tag block: the trailing run of unit
/// clauses over the highest-numbered variables, in ascending variable order,
/// decoded with decode_pair. Throws std::invalid_argument when the formula
/// does not carry a well-formed tag block.
FacInstance invert_reduction(const CnfFormula& f);

/// Brute-force ground truth: does x have a nontrivial factor (2 <= p < x)
/// whose minimal binary representation starts with a?
bool factor_prefix_oracle(const FacInstance& z);

struct ReductionReport {
    bool formula_satisfiable = false;
    bool oracle_satisfiable = false;
    bool match = false;
    bool roundtrip_ok = false;
    int variables = 0;
    int clauses = 0;
};

/// Solves the reduced formula, compares against the brute-force oracle and
/// checks invert(reduce(z)) == z. Requires x <= 2^20.
ReductionReport verify_reduction(const FacInstance& z);

}  // namespace queasylab
