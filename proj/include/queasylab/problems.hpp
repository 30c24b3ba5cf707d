#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "queasylab/bitstring.hpp"

namespace queasylab {

// --- toy languages ----------------------------------------------------------

/// Ground-truth decision function for a toy language. chi must be total and
/// deterministic on the instances it is handed.
struct LanguageOracle {
    std::string name;
    std::function<bool(const BitString&)> chi;
};

/// Strings with an odd number of ones.
LanguageOracle parity_language();
/// The complement of parity_language().
LanguageOracle odd_zero_parity_language();
/// Everything / nothing; degenerate languages used for calibration corpora.
LanguageOracle full_language();
LanguageOracle empty_language();
/// Pairs <x,a> (see encode_pair) whose largest prime factor starts with a.
/// Bitstrings that are not valid pair encodings are not in the language.
LanguageOracle fac_language();

// --- factoring --------------------------------------------------------------

struct FacInstance {
    std::uint64_t x = 0;  // 2 <= x <= 2^40
    BitString a;          // candidate prefix of the largest prime factor
};

constexpr std::uint64_t kFacMaxX = std::uint64_t{1} << 40;

bool is_prime(std::uint64_t n);
std::uint64_t largest_prime_factor(std::uint64_t x);

/// Minimal binary representation (leading bit 1); bit_length(v) bits.
BitString minimal_binary(std::uint64_t v);

/// 1 iff the minimal binary representation of the largest prime factor of
/// z.x begins with z.a. The empty prefix accepts everything.
/// Throws std::invalid_argument when x is outside [2, 2^40].
bool fac_decide(const FacInstance& z);

/// Self-delimiting pairing <x,a>: a unary length-of-length header (1^k 0),
/// the bit length of x in k bits, x's minimal binary form, then a verbatim.
BitString encode_pair(std::uint64_t x, const BitString& a);
std::optional<FacInstance> try_decode_pair(const BitString& bits);
/// Throwing variant of try_decode_pair.
FacInstance decode_pair(const BitString& bits);

// --- CNF --------------------------------------------------------------------

struct CnfFormula {
    int variable_count = 0;
    std::vector<std::vector<int>> clauses;  // nonzero literals, |lit| <= variable_count
    // Tag block: the highest-numbered variables, each pinned by exactly one
    // unit clause at the end of the clause list; disjoint from the semantic
    // variables. Zero when the formula carries no tag.
    int tag_variable_count = 0;
    // Comment lines (without the leading "c "); a side channel only, never
    // semantic.
    std::vector<std::string> comments;
};

/// Throws std::invalid_argument on empty clauses or out-of-range literals.
void validate_formula(const CnfFormula& f);

/// Budget-limited DPLL with unit propagation. The budget is a count of
/// branching decisions; unit propagation is free. Returns 1 (satisfiable),
/// 0 (unsatisfiable), or Bot when the budget runs out before resolution.
/// Non-Bot answers are always correct.
enum class SolverAnswer : std::uint8_t { Unsat = 0, Sat = 1, Bot = 2 };
SolverAnswer sat_decide_budgeted(const CnfFormula& f, std::uint64_t budget);

/// The satisfying assignment found by an unbudgeted run, if any.
/// assignment[v-1] is the value of variable v.
std::optional<std::vector<bool>> sat_solve(const CnfFormula& f);

/// Exhaustive oracle; requires variable_count <= 24.
bool sat_brute_force(const CnfFormula& f);

// --- DIMACS -----------------------------------------------------------------

class DimacsError : public std::runtime_error {
  public:
    DimacsError(int line, const std::string& msg)
        : std::runtime_error("dimacs: line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

CnfFormula parse_dimacs(const std::string& text);
std::string emit_dimacs(const CnfFormula& f);

}  // namespace queasylab
