#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "queasylab/bitstring.hpp"
#include "queasylab/complexity.hpp"
#include "queasylab/problems.hpp"

namespace queasylab {

// --- circuits ----------------------------------------------------------------

enum class GateKind : std::uint8_t { H = 0, T = 1, X = 2, Cnot = 3 };

struct Gate {
    GateKind kind;
    std::uint8_t q0 = 0;  // target (control for CNOT)
    std::uint8_t q1 = 0;  // CNOT target
};

/// A classical description of a quantum circuit over {H, T, X, CNOT}.
/// measured lists the read-out qubits in output-bit order. For acceptor-style
/// use, inputs are loaded as X gates on qubits 0..n-1 before the gate list
/// runs; a distinguisher measures one qubit (the answer) and a consistent
/// decider measures two (confidence first, answer second).
struct GateCircuit {
    int qubit_count = 1;
    std::vector<Gate> gates;
    std::vector<std::uint8_t> measured;
};

constexpr int kMaxSimulatedQubits = 12;
constexpr int kMaxCodecQubits = 8;

/// Bit-exact circuit codec. Header: qubit_count-1 (3 bits), measured_count-1
/// (3 bits), then the measured indices; gates follow as a 3-bit kind tag plus
/// qubit indices. All indices are ceil(log2(qubit_count)) bits; every
/// multi-bit field is little-endian within the stream.
BitString encode_circuit(const GateCircuit& c);
std::optional<GateCircuit> decode_circuit(const BitString& bits);

namespace detail {
std::optional<GateCircuit> decode_circuit_raw(const std::uint64_t* words, std::uint32_t len);
}

/// Textual fixture format: "qubits N", "measure i j ...", then one gate per
/// line ("h 0", "x 2", "t 1", "cnot 0 3"). '#' starts a comment.
GateCircuit parse_circuit_text(const std::string& text);
std::string circuit_to_text(const GateCircuit& c);

// --- simulation ----------------------------------------------------------------

/// Exact output distribution over the measured qubits, in measured-list bit
/// order. Deterministic; refuses circuits beyond kMaxSimulatedQubits.
struct OutcomeDistribution {
    std::map<std::string, double> probs;
};
OutcomeDistribution simulate(const GateCircuit& c);

/// P(answer qubit = 1) with y loaded on qubits 0..|y|-1. Requires exactly one
/// measured qubit and qubit_count >= |y|.
double accept_probability(const GateCircuit& c, const BitString& y);

struct ConfidenceReadout {
    double p_know = 0.0;     // P(confidence qubit = 1)
    double p_correct = 0.0;  // P(answer qubit = chi)
};
/// Readout for a two-qubit-measured decider circuit on input y.
ConfidenceReadout confidence_readout(const GateCircuit& c, const BitString& y, bool chi_y);

// --- the gap lemma ---------------------------------------------------------

struct GapResult {
    int index = 0;  // 1-based; may equal k (the drop to the appended zero)
    double gap = 0.0;
};

/// First index i in 1..k with p_i - p_{i+1} >= p_1^2/(2+p_1), reading
/// p_{k+1} = 0. Throws on unsorted, negative, or supernormalized input.
GapResult gap_index(const std::vector<double>& descending_probs);

// --- amplification -----------------------------------------------------------

struct AmplificationPlan {
    int n_copies = 0;
    int j = 0;           // rank cut: the j most likely strings form the list L
    int a = 0;           // 1-based lexicographic position of the target in L
    double r = 1.0;      // amplification base exp(delta^2/3)
    double two_delta = 0.0;
};

struct AmplifyOutcome {
    AmplificationPlan plan;
    double success_estimate = 0.0;  // fraction of trials that returned the target
};

/// Monte-Carlo run of the rank-cut amplification procedure: sample n_copies
/// shots, keep the plan's j most frequent strings, order them
/// lexicographically, output the a-th. Deterministic under the seed.
AmplifyOutcome amplify(const GateCircuit& c, const BitString& target, int n_copies,
                       std::uint64_t seed, int trials = 1000);

/// The same procedure driven by an explicit outcome distribution.
AmplifyOutcome amplify_distribution(const std::vector<std::pair<std::string, double>>& outcomes,
                                    const std::string& target, int n_copies, std::uint64_t seed,
                                    int trials = 1000);

// --- quantum measures --------------------------------------------------------

constexpr double kDefaultQuantumEpsilon = 0.1;

/// Shortest program whose generator output decodes to a circuit giving x
/// probability >= epsilon.
ComplexityValue qc_t(const BitString& x, double epsilon, const SearchLimits& limits);

/// Shortest program emitting a circuit that accepts x with probability
/// > 1/2+epsilon and every other universe member with probability
/// < 1/2-epsilon.
ComplexityValue qcd_t(const BitString& x, double epsilon, const SearchLimits& limits);

/// Shortest program emitting a quantum epsilon-L-consistent circuit that
/// decides x confidently.
ComplexityValue qic_t(const BitString& x, const LanguageOracle& language, double epsilon,
                      const SearchLimits& limits);

struct QuantumBatchResult {
    std::vector<BitString> members;
    std::vector<ComplexityValue> qc;
    std::vector<ComplexityValue> qcd;
    std::vector<std::vector<ComplexityValue>> qic;  // [language][member]
};

/// One scan computing qc and qcd for every member and qic per language.
QuantumBatchResult quantum_batch_search(const SearchLimits& limits, double epsilon,
                                        const std::vector<LanguageOracle>& languages,
                                        bool want_qc, bool want_qcd);

// --- predicates ----------------------------------------------------------------

bool circuit_outputs_with_probability(const GateCircuit& c, const BitString& x, double epsilon);
bool circuit_distinguishes(const GateCircuit& c, const BitString& x,
                           const std::vector<BitString>& universe, double epsilon);
/// Quantum epsilon-L-consistency over the universe: every member lands in the
/// confident branch (with a correct answer) or the confident-refusal branch.
bool circuit_quantum_consistent(const GateCircuit& c, const LanguageOracle& language,
                                const std::vector<BitString>& universe, double epsilon);
bool circuit_decides_confidently(const GateCircuit& c, const BitString& y, bool chi_y,
                                 double epsilon);

// --- classical-to-quantum embedding ----------------------------------------

/// A classical acceptor realized as a circuit plus the literal program that
/// emits that circuit's description. Synthesis covers verdict tables in the
/// affine-XOR family (constants, single bits, parities and their negations),
/// which is where the measured embedding constants come from.
struct EmbeddedAcceptor {
    GateCircuit circuit;
    BitString emitter;
};

std::optional<EmbeddedAcceptor> embed_distinguisher(const BitString& program, const BitString& x,
                                                    const std::vector<BitString>& universe,
                                                    ExecutionBudget budget);
std::optional<EmbeddedAcceptor> embed_decider(const BitString& program,
                                              const LanguageOracle& language,
                                              const std::vector<BitString>& universe,
                                              ExecutionBudget budget);

/// The program that prints `bits` and halts by falling off the end:
/// one EMIT per bit, 4 program bits each.
BitString literal_emitter(const BitString& bits);

}  // namespace queasylab
