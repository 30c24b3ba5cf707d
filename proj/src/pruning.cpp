#include "queasylab/pruning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "queasylab/rng.hpp"

namespace queasylab {

CandidateDecider oracle_decider(const std::string& id) {
    CandidateDecider d;
    d.id = id;
    d.description_length = 1;
    d.decide = [](const FacInstance& z) {
        return fac_decide(z) ? SolverAnswer::Sat : SolverAnswer::Unsat;
    };
    return d;
}

CandidateDecider adversarial_decider(std::uint64_t seed, int index) {
    CandidateDecider d;
    d.id = "adversary-" + std::to_string(index);
    d.description_length = 1;
    std::uint64_t key = CounterRng::mix(seed ^ (static_cast<std::uint64_t>(index) * 0x9e3779b97f4a7c15ULL));
    d.decide = [key](const FacInstance& z) {
        std::uint64_t h = CounterRng::mix(key ^ CounterRng::mix(z.x));
        for (std::size_t i = 0; i < z.a.size(); ++i)
            h = CounterRng::mix(h ^ (z.a[i] ? 0x517cc1b727220a95ULL : 0x2545f4914f6cdd1dULL));
        double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (u < 0.40) return SolverAnswer::Sat;
        if (u < 0.80) return SolverAnswer::Unsat;
        return SolverAnswer::Bot;
    };
    return d;
}

RoundTrace prune_round(PruneState& state, const std::vector<CandidateDecider>& pool) {
    if (state.pos.empty() && !state.good.empty())
        throw std::runtime_error("prune_round: no live extensions (premise violated)");
    RoundTrace trace;
    trace.round = state.round + 1;
    trace.good_before = state.good.size();
    trace.pos_before = state.pos.size();

    std::vector<std::size_t> survivors;
    std::vector<char> kept(state.pos.size(), 0);
    std::vector<std::vector<char>> accepted_by(state.good.size(),
                                               std::vector<char>(state.pos.size(), 0));
    for (std::size_t gi = 0; gi < state.good.size(); ++gi) {
        const CandidateDecider& member = pool[state.good[gi]];
        int accepts = 0;
        for (std::size_t bi = 0; bi < state.pos.size(); ++bi) {
            FacInstance query{state.x, state.pos[bi]};
            ++state.decider_calls;
            ++trace.calls;
            if (member.decide(query) == SolverAnswer::Sat) {
                accepted_by[gi][bi] = 1;
                ++accepts;
            }
        }
        // Two distinct accepted extensions contradict FAC-consistency.
        if (accepts >= 2)
            trace.ejected.push_back(member.id);
        else
            survivors.push_back(gi);
    }
    for (std::size_t gi : survivors)
        for (std::size_t bi = 0; bi < state.pos.size(); ++bi)
            if (accepted_by[gi][bi]) kept[bi] = 1;

    std::vector<std::size_t> new_good;
    for (std::size_t gi : survivors) new_good.push_back(state.good[gi]);
    std::vector<BitString> new_pos;
    for (std::size_t bi = 0; bi < state.pos.size(); ++bi)
        if (kept[bi]) new_pos.push_back(state.pos[bi]);

    state.good = std::move(new_good);
    state.pos = std::move(new_pos);
    ++state.round;
    trace.good_after = state.good.size();
    trace.pos_after = state.pos.size();
    return trace;
}

void extend_pos(PruneState& state, int k) {
    if (k < 1 || k > 20) throw std::invalid_argument("extend_pos: k outside [1, 20]");
    std::vector<BitString> extended;
    extended.reserve(state.pos.size() << k);
    for (const auto& b : state.pos) {
        std::uint64_t count = std::uint64_t{1} << k;
        for (std::uint64_t c = 0; c < count; ++c) {
            BitString e = b;
            e.append(BitString::from_value(c, static_cast<std::size_t>(k)));
            extended.push_back(e);
        }
    }
    state.pos = std::move(extended);
}

namespace {

int capacity_extension_width(std::size_t pos_size, std::size_t m) {
    int k = 1;
    while ((pos_size << k) < 2 * m && k < 20) ++k;
    return k;
}

/// Largest prime divisor among the live extensions, 0 if none. Every prime
/// divisor of x is at most the largest prime factor, so the maximum seen
/// across rounds is exactly the factor once its length has been reached.
std::uint64_t best_prime_divisor(const PruneState& state) {
    std::uint64_t best = 0;
    for (const auto& b : state.pos) {
        if (b.size() == 0 || b.size() > 60 || !b[0]) continue;  // not a minimal form
        std::uint64_t v = b.to_value();
        if (v < 2 || state.x % v != 0) continue;
        if (is_prime(v)) best = std::max(best, v);
    }
    return best;
}

}  // namespace

PruneResult extend_and_prune(std::uint64_t x, const std::vector<CandidateDecider>& pool,
                             int k_width) {
    if (x < 2) throw std::invalid_argument("extend_and_prune: x must be >= 2");
    if (pool.empty()) throw std::invalid_argument("extend_and_prune: empty pool");
    if (k_width < 0) throw std::invalid_argument("extend_and_prune: negative k_width");

    PruneState state;
    state.x = x;
    state.m = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) state.good.push_back(i);

    const bool capacity_rule = k_width == 0;
    int initial_width = capacity_rule ? capacity_extension_width(1, state.m) : k_width;
    state.pos.push_back(BitString{});
    extend_pos(state, initial_width);  // {0,1}^initial_width

    const int max_len = std::bit_width(x);
    PruneResult result;
    std::uint64_t best = 0;

    while (static_cast<int>(state.pos[0].size()) <= max_len) {
        RoundTrace trace = prune_round(state, pool);
        result.trace.push_back(trace);
        if (state.pos.empty()) break;  // nothing live: either done or hopeless
        ++result.rounds;
        best = std::max(best, best_prime_divisor(state));
        int k = capacity_rule ? capacity_extension_width(state.pos.size(), state.m) : k_width;
        if (static_cast<int>(state.pos[0].size()) + k > max_len) break;
        extend_pos(state, k);
    }

    result.decider_calls = state.decider_calls;
    if (best == 0)
        throw std::runtime_error(
            "extend_and_prune: no factor recovered (consistent-decider premise violated)");
    result.factor_bits = minimal_binary(best);
    return result;
}

CostModel cost_model(int n, double delta, double t_of_2n) {
    if (n < 1) throw std::invalid_argument("cost_model: n must be >= 1");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("cost_model: delta outside (0, 1)");
    CostModel c;
    c.m = static_cast<std::uint64_t>(std::floor(std::exp2(std::pow(static_cast<double>(n), delta))));
    c.runs_per_round = 4 * c.m * c.m;
    c.total_bound = 4.0 * static_cast<double>(n) * static_cast<double>(c.m) *
                    static_cast<double>(c.m) * t_of_2n;
    return c;
}

}  // namespace queasylab
