#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "queasylab/bitstring.hpp"
#include "queasylab/problems.hpp"

namespace queasylab {

/// A candidate FAC-consistent decider. The pool is supplied explicitly: at
/// desk scale the members are oracle-backed deciders, hand-built programs or
/// seeded adversaries rather than an enumeration of every short program.
struct CandidateDecider {
    std::string id;
    int description_length = 1;
    std::function<SolverAnswer(const FacInstance&)> decide;  // 1 / 0 / Bot
};

/// Honest decider answering chi_FAC exactly.
CandidateDecider oracle_decider(const std::string& id = "oracle");
/// Seeded adversary answering pseudo-randomly (accept/reject/bot); it is not
/// FAC-consistent and double-acceptances eventually eject it.
CandidateDecider adversarial_decider(std::uint64_t seed, int index);

struct PruneState {
    std::uint64_t x = 0;
    std::vector<std::size_t> good;  // surviving pool indices
    std::vector<BitString> pos;     // live prefix extensions, one shared length
    std::size_t m = 0;              // pool capacity: |GOOD| at the start
    int round = 0;
    std::uint64_t decider_calls = 0;
};

struct RoundTrace {
    int round = 0;
    std::size_t good_before = 0, good_after = 0;
    std::size_t pos_before = 0, pos_after = 0;
    std::uint64_t calls = 0;
    std::vector<std::string> ejected;
};

/// One prune round: run every surviving member on <x, b> for each b in pos,
/// eject members that accept two distinct extensions, keep the extensions
/// accepted by some survivor. Throws on an empty pos with survivors present.
RoundTrace prune_round(PruneState& state, const std::vector<CandidateDecider>& pool);

/// Appends every suffix in {0,1}^k to every live extension.
void extend_pos(PruneState& state, int k);

struct PruneResult {
    BitString factor_bits;  // minimal binary representation of the factor
    int rounds = 0;         // prune rounds that ended with a live extension
    std::uint64_t decider_calls = 0;
    std::vector<RoundTrace> trace;
};

/// Recovers the largest prime factor of x from the pool. k_width > 0 fixes
/// the initial width and per-round extension width; k_width == 0 uses the
/// capacity rule (minimum k with 2^k * |pos| >= 2m, starting from
/// ceil(log2(2m)) bits), which presumes factors at least that long.
/// Throws std::runtime_error when the premise fails and no factor surfaced.
PruneResult extend_and_prune(std::uint64_t x, const std::vector<CandidateDecider>& pool,
                             int k_width);

struct CostModel {
    std::uint64_t m = 0;               // floor(2^(n^delta))
    std::uint64_t runs_per_round = 0;  // 4 m^2
    double total_bound = 0.0;          // 4 n m^2 t(2n)
};

/// The proof's accounting, reported symbolically; t_of_2n is the per-run
/// budget of the candidate programs.
CostModel cost_model(int n, double delta, double t_of_2n = 1.0);

}  // namespace queasylab
