#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "queasylab/bitstring.hpp"
#include "queasylab/machine.hpp"
#include "queasylab/problems.hpp"

namespace queasylab {

// --- search configuration ----------------------------------------------------

/// The finite set of strings over which distinguishing and consistency
/// predicates are checked.
struct UniverseSpec {
    enum class Kind { SameLength, UpToLength };
    Kind kind = Kind::SameLength;
    int n = 0;

    static UniverseSpec same_length(int n) { return {Kind::SameLength, n}; }
    static UniverseSpec up_to_length(int n) { return {Kind::UpToLength, n}; }

    bool contains(const BitString& x) const {
        return kind == Kind::SameLength ? static_cast<int>(x.size()) == n
                                        : static_cast<int>(x.size()) <= n;
    }
    std::string to_string() const {
        return (kind == Kind::SameLength ? "same_length(" : "up_to_length(") + std::to_string(n) +
               ")";
    }
};

/// Members in value order per length (lengths ascending for UpToLength).
std::vector<BitString> universe_members(const UniverseSpec& u);

struct SearchLimits {
    int max_program_len = 14;      // bits; enumeration cost is 2^(len+1) programs
    ExecutionBudget step_budget{256};
    UniverseSpec universe;
};

/// Default profiles keep enumeration at or below 2^27 program runs.
constexpr int kDefaultMaxProgramLen = 26;
/// Hard engine cap; packed single-word program representation.
constexpr int kHardMaxProgramLen = 32;

// --- results ------------------------------------------------------------------

/// A complexity measure outcome. A missing value means AboveLimit: no program
/// of length <= search_cap satisfies the measure's predicate. Censored values
/// are first-class results, never errors.
struct ComplexityValue {
    std::optional<int> value;
    std::optional<BitString> witness;
    int search_cap = 0;

    bool censored() const { return !value.has_value(); }
};

/// Observable violation of  lhs <= rhs + slack  under enumeration capped at
/// each side's search_cap. Both measured: direct comparison. lhs censored
/// with rhs measured: a violation is visible exactly when rhs + slack fits
/// under lhs's cap (the true lhs provably exceeds it). rhs censored: nothing
/// is observable.
bool chain_violation(const ComplexityValue& lhs, const ComplexityValue& rhs, int slack);

// --- the measures ---------------------------------------------------------

/// Length of the shortest program that halts within the step budget having
/// written exactly x; the witness is the (length, lex)-least such program.
ComplexityValue c_t(const BitString& x, const SearchLimits& limits);

/// Shortest program accepting x and rejecting every other universe member.
ComplexityValue cd_t(const BitString& x, const SearchLimits& limits);

/// Shortest program that is L-consistent over the whole universe and decides
/// x (answers chi_L(x), not ⊥).
ComplexityValue ic_t(const BitString& x, const LanguageOracle& language,
                     const SearchLimits& limits);

// --- batch engine -----------------------------------------------------------

/// One enumeration pass computing c and cd for every universe member and ic
/// for every (language, member) pair. Equivalent to calling the single-
/// instance searches per cell, at a fraction of the cost.
struct BatchRequest {
    SearchLimits limits;
    std::vector<LanguageOracle> languages;
    bool want_c = true;
    bool want_cd = true;
};

struct BatchResult {
    std::vector<BitString> members;
    std::vector<ComplexityValue> c;                // per member
    std::vector<ComplexityValue> cd;               // per member
    std::vector<std::vector<ComplexityValue>> ic;  // [language][member]
};

BatchResult batch_search(const BatchRequest& request);

// --- derived judgements -----------------------------------------------------

enum class InstanceHardness { Easy, Hard, Indeterminate };

/// Hard when cd - ic <= threshold, Easy when the gap is larger. Censoring on
/// either side refuses with Indeterminate. The threshold is explicit because
/// the machine constants hidden by the paper-style comparisons are ours.
InstanceHardness classify_instance(const ComplexityValue& cd_value, const ComplexityValue& ic_value,
                                   int threshold);

struct UtilitySet {
    std::vector<BitString> members;
    std::size_t count() const { return members.size(); }
};

/// The universe members a program answers (non-⊥). Throws if the program is
/// not L-consistent on the universe; callers own that precondition.
UtilitySet utility_set(const BitString& program, const LanguageOracle& language,
                       const SearchLimits& limits);

// --- witness predicates --------------------------------------------------

// Direct statements of each measure's defining predicate, used by the test
// suite to re-validate search winners rather than trusting the scan.

bool is_generator_witness(const BitString& program, const BitString& x, ExecutionBudget budget);
bool is_distinguishing_witness(const BitString& program, const BitString& x,
                               const std::vector<BitString>& universe, ExecutionBudget budget);
bool is_consistent_decider(const BitString& program, const BitString& x,
                           const LanguageOracle& language, const std::vector<BitString>& universe,
                           ExecutionBudget budget);

/// Worker count for the enumeration scans: QUEASYLAB_THREADS when set, else 1.
int worker_count();

}  // namespace queasylab
