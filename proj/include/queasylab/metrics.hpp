#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "queasylab/bitstring.hpp"
#include "queasylab/complexity.hpp"
#include "queasylab/problems.hpp"

namespace queasylab {

// --- lossless compressor (distinguishing-complexity proxy) -----------------

/// Self-contained sliding-window match/literal compressor over bit strings.
/// Deterministic; decompress(compress(x)) == x always.
BitString compress_bits(const BitString& x);
BitString decompress_bits(const BitString& compressed);

/// Compressed size in bits.
int compressor_cd_proxy(const BitString& x);

// --- queasiness quantities ---------------------------------------------------

/// ic - qic in bits; censored when either side is. Negative values are
/// possible in proxy mode and are reported raw.
std::optional<int> delta_ic(const ComplexityValue& ic, const ComplexityValue& qic);

/// 1 - qic/ic. Requires ic >= 1 when both sides are measured; censored
/// inputs give a censored result.
std::optional<double> ric(const ComplexityValue& ic, const ComplexityValue& qic);

enum class QueasyClass { Easy, Queasy, Hard, Indeterminate };
const char* to_string(QueasyClass c);

/// Threshold classification: Queasy when qic + margin < ic, Easy when both
/// sit at or below the margin, Hard when both sit within margin of cd, and
/// Indeterminate when censoring or no rule applies.
QueasyClass classify_queasy(const ComplexityValue& ic, const ComplexityValue& qic,
                            const ComplexityValue& cd, int margin);

// --- solver portfolio (instance-complexity proxy) ---------------------------

struct PortfolioMember {
    std::string id;
    int description_length = 1;  // declared up front, never tuned per instance
    std::uint64_t decision_budget = 0;
};

struct ProxyConfig {
    std::vector<PortfolioMember> portfolio;
    /// Declared constant standing in for the quantum side on instances whose
    /// language is known to be in BQP; absent means censored.
    std::optional<int> declared_qic;
    int margin = 4;
};

/// Throws std::invalid_argument when a member's answer contradicts the
/// brute-force oracle on any validation formula (configuration error).
void validate_portfolio(const ProxyConfig& config, const std::vector<CnfFormula>& validation);

struct ProxyIcResult {
    std::optional<int> value;  // min description length over the deciding members
    std::string decider_id;    // empty when censored
};
ProxyIcResult solver_ic_proxy(const CnfFormula& f, const ProxyConfig& config);

// --- landscape ------------------------------------------------------------------

struct QueasinessRecord {
    std::string instance_id;
    std::string language;
    std::string mode;  // "exact" or "proxy"
    int n = 0;         // |x| in exact mode, variable count in proxy mode
    ComplexityValue ic, qic, cd, c;
    std::optional<int> delta;
    std::optional<double> ric_value;
    QueasyClass classification = QueasyClass::Indeterminate;
    bool anomaly = false;  // negative proxy queasiness, reported raw
    std::uint64_t seed = 0;
    std::string budgets;
};

struct ExactLandscapeConfig {
    int max_program_len = 20;
    ExecutionBudget classical_budget{256};
    ExecutionBudget quantum_budget{256};
    double epsilon = 0.1;
    int margin = 4;
    std::uint64_t seed = 0;
};

/// Exact-mode landscape: full enumeration per instance length, classical and
/// quantum. Instances beyond enumeration reach come back censored, never
/// fabricated. Deterministic for a fixed config.
std::vector<QueasinessRecord> landscape_exact(const std::vector<BitString>& instances,
                                              const LanguageOracle& language,
                                              const ExactLandscapeConfig& config);

/// Proxy-mode landscape over CNF instances: the compressor stands in for cd
/// and the portfolio for ic; the quantum side is the declared constant.
std::vector<QueasinessRecord> landscape_proxy(
    const std::vector<std::pair<std::string, CnfFormula>>& instances, const ProxyConfig& config,
    std::uint64_t seed);

/// Fixed column order:
/// instance_id,language,mode,n,ic,qic,cd,c,delta_ic,ric,class,censored,seed,budgets
std::string records_to_csv(const std::vector<QueasinessRecord>& records);

}  // namespace queasylab
