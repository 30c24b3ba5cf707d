// Measures the machine-specific constants frozen in constants.hpp.
//
// The measured corpus is the largest slice of instance space where the exact
// searches still find witnesses: one-bit universes under the four basic
// languages, singleton universes, and the literal-emitter embedding of the
// classical witnesses found there.

#include <cstdio>
#include <string>
#include <vector>

#include "queasylab/complexity.hpp"
#include "queasylab/constants.hpp"
#include "queasylab/metrics.hpp"
#include "queasylab/quantum.hpp"
#include "queasylab/rng.hpp"

using namespace queasylab;

namespace {

struct Extremes {
    int ic_minus_cd = -1000;
    int cd_minus_c = -1000;
    int quantum_overhead = -1000;
};

void consider_pair(Extremes& e, const char* what, const std::string& detail, int value,
                   int* slot) {
    std::printf("  %-28s %-24s %+d\n", what, detail.c_str(), value);
    if (value > *slot) *slot = value;
}

}  // namespace

int main() {
    Extremes e;
    std::vector<LanguageOracle> langs = {parity_language(), odd_zero_parity_language(),
                                         full_language(), empty_language()};

    std::printf("one-bit universe, max_program_len 26\n");
    SearchLimits limits;
    limits.max_program_len = 26;
    limits.step_budget = {64};
    limits.universe = UniverseSpec::same_length(1);
    BatchRequest req;
    req.limits = limits;
    req.languages = langs;
    BatchResult batch = batch_search(req);
    auto universe = batch.members;

    for (std::size_t m = 0; m < batch.members.size(); ++m) {
        std::string x = batch.members[m].to_string();
        if (!batch.cd[m].censored() && !batch.c[m].censored())
            consider_pair(e, "cd - c", "x=" + x, *batch.cd[m].value - *batch.c[m].value,
                          &e.cd_minus_c);
        for (std::size_t l = 0; l < langs.size(); ++l) {
            if (batch.ic[l][m].censored() || batch.cd[m].censored()) continue;
            consider_pair(e, "ic - cd", langs[l].name + " x=" + x,
                          *batch.ic[l][m].value - *batch.cd[m].value, &e.ic_minus_cd);
        }
        // Quantum side via the literal-emitter embedding of the found witnesses.
        if (!batch.cd[m].censored()) {
            auto emb = embed_distinguisher(*batch.cd[m].witness, batch.members[m], universe,
                                           limits.step_budget);
            if (emb)
                consider_pair(e, "qcd_upper - cd", "x=" + x,
                              static_cast<int>(emb->emitter.size()) - *batch.cd[m].value,
                              &e.quantum_overhead);
        }
        for (std::size_t l = 0; l < langs.size(); ++l) {
            if (batch.ic[l][m].censored()) continue;
            auto emb = embed_decider(*batch.ic[l][m].witness, langs[l], universe,
                                     limits.step_budget);
            if (emb)
                consider_pair(e, "qic_upper - ic", langs[l].name + " x=" + x,
                              static_cast<int>(emb->emitter.size()) - *batch.ic[l][m].value,
                              &e.quantum_overhead);
        }
    }

    std::printf("singleton universes (ACCEPT witnesses)\n");
    // cd over a singleton universe is the shortest always-accept program; the
    // measured chain gaps there are zero by construction, checked anyway.
    SearchLimits single;
    single.max_program_len = 12;
    single.step_budget = {64};
    single.universe = UniverseSpec::same_length(0);
    BatchRequest sreq;
    sreq.limits = single;
    sreq.languages = {full_language()};
    BatchResult sb = batch_search(sreq);
    if (!sb.cd[0].censored() && !sb.ic[0][0].censored())
        consider_pair(e, "ic - cd", "singleton", *sb.ic[0][0].value - *sb.cd[0].value,
                      &e.ic_minus_cd);

    std::printf("compressor repetition overhead, 40 seeded strings\n");
    int c_rep = -1000;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        CounterRng rng(seed);
        BitString x;
        std::size_t len = 64 + rng.next_below(961);
        for (std::size_t i = 0; i < len; ++i) x.push_back(rng.next_bool(0.5));
        BitString xx = x;
        xx.append(x);
        int over = compressor_cd_proxy(xx) - compressor_cd_proxy(x);
        if (over > c_rep) c_rep = over;
    }
    std::printf("  max proxy(xx) - proxy(x)                            %+d\n", c_rep);

    std::printf("\nmeasured:\n");
    std::printf("  c1 (ic <= cd + c1)   = %d   frozen %d\n", e.ic_minus_cd,
                constants::kChainIcCdSlack);
    std::printf("  c2 (cd <= c + c2)    = %d   frozen %d\n", e.cd_minus_c,
                constants::kChainCdCSlack);
    std::printf("  c_enc (quantum)      = %d   frozen %d\n", e.quantum_overhead,
                constants::kQuantumEncodingSlack);
    std::printf("  c_rep (compressor)   = %d   frozen %d\n", c_rep,
                constants::kCompressorRepetitionSlack);
    bool ok = e.ic_minus_cd <= constants::kChainIcCdSlack &&
              e.cd_minus_c <= constants::kChainCdCSlack &&
              e.quantum_overhead <= constants::kQuantumEncodingSlack &&
              c_rep <= constants::kCompressorRepetitionSlack;
    std::printf("frozen bounds %s\n", ok ? "hold" : "VIOLATED");
    return ok ? 0 : 1;
}
