#include "queasylab/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "queasylab/machine.hpp"
#include "queasylab/rng.hpp"

namespace queasylab {

namespace {

int index_width(int qubit_count) {
    return qubit_count <= 1 ? 0 : std::bit_width(static_cast<unsigned>(qubit_count - 1));
}

void check_circuit(const GateCircuit& c, int max_qubits) {
    if (c.qubit_count < 1 || c.qubit_count > max_qubits)
        throw std::invalid_argument("circuit: qubit_count outside [1, " +
                                    std::to_string(max_qubits) + "]");
    if (c.measured.empty()) throw std::invalid_argument("circuit: nothing measured");
    for (std::size_t i = 0; i < c.measured.size(); ++i) {
        if (c.measured[i] >= c.qubit_count)
            throw std::invalid_argument("circuit: measured index out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (c.measured[i] == c.measured[j])
                throw std::invalid_argument("circuit: duplicate measured index");
    }
    for (const Gate& g : c.gates) {
        if (g.q0 >= c.qubit_count || (g.kind == GateKind::Cnot && g.q1 >= c.qubit_count))
            throw std::invalid_argument("circuit: gate qubit out of range");
        if (g.kind == GateKind::Cnot && g.q0 == g.q1)
            throw std::invalid_argument("circuit: CNOT control equals target");
    }
}

}  // namespace

// --- codec -------------------------------------------------------------------

BitString encode_circuit(const GateCircuit& c) {
    check_circuit(c, kMaxCodecQubits);
    if (c.measured.size() > 8) throw std::invalid_argument("circuit codec: too many measured");
    BitString out;
    auto field = [&out](std::uint32_t v, int bits) {
        for (int i = 0; i < bits; ++i) out.push_back(((v >> i) & 1) != 0);
    };
    int w = index_width(c.qubit_count);
    field(static_cast<std::uint32_t>(c.qubit_count - 1), 3);
    field(static_cast<std::uint32_t>(c.measured.size() - 1), 3);
    for (std::uint8_t m : c.measured) field(m, w);
    for (const Gate& g : c.gates) {
        field(static_cast<std::uint32_t>(g.kind), 3);
        field(g.q0, w);
        if (g.kind == GateKind::Cnot) field(g.q1, w);
    }
    return out;
}

namespace detail {

std::optional<GateCircuit> decode_circuit_raw(const std::uint64_t* words, std::uint32_t len) {
    std::uint32_t pos = 0;
    auto have = [&](std::uint32_t k) { return len - pos >= k && pos <= len; };
    auto take = [&](std::uint32_t k) {
        std::uint32_t v = k == 0 ? 0 : get_field(words, pos, k);
        pos += k;
        return v;
    };
    if (!have(6)) return std::nullopt;
    GateCircuit c;
    c.qubit_count = static_cast<int>(take(3)) + 1;
    int measured_count = static_cast<int>(take(3)) + 1;
    std::uint32_t w = static_cast<std::uint32_t>(index_width(c.qubit_count));
    if (!have(w * static_cast<std::uint32_t>(measured_count))) return std::nullopt;
    for (int i = 0; i < measured_count; ++i) {
        std::uint8_t m = static_cast<std::uint8_t>(take(w));
        if (m >= c.qubit_count) return std::nullopt;
        for (std::uint8_t prev : c.measured)
            if (prev == m) return std::nullopt;
        c.measured.push_back(m);
    }
    while (pos < len) {
        if (!have(3)) return std::nullopt;
        std::uint32_t tag = take(3);
        if (tag > 3) return std::nullopt;
        Gate g{static_cast<GateKind>(tag), 0, 0};
        if (!have(w)) return std::nullopt;
        g.q0 = static_cast<std::uint8_t>(take(w));
        if (g.q0 >= c.qubit_count) return std::nullopt;
        if (g.kind == GateKind::Cnot) {
            if (!have(w)) return std::nullopt;
            g.q1 = static_cast<std::uint8_t>(take(w));
            if (g.q1 >= c.qubit_count || g.q1 == g.q0) return std::nullopt;
        }
        c.gates.push_back(g);
    }
    return c;
}

}  // namespace detail

std::optional<GateCircuit> decode_circuit(const BitString& bits) {
    return detail::decode_circuit_raw(bits.words(), static_cast<std::uint32_t>(bits.size()));
}

// --- text form -----------------------------------------------------------------

GateCircuit parse_circuit_text(const std::string& text) {
    GateCircuit c;
    c.qubit_count = 0;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string tok;
        if (!(ls >> tok)) continue;
        auto fail = [&](const std::string& msg) {
            throw std::invalid_argument("circuit text: line " + std::to_string(line_no) + ": " +
                                        msg);
        };
        auto take_qubit = [&]() {
            int q;
            if (!(ls >> q) || q < 0 || q > 255) fail("expected qubit index");
            return static_cast<std::uint8_t>(q);
        };
        if (tok == "qubits") {
            int n;
            if (!(ls >> n)) fail("expected qubit count");
            c.qubit_count = n;
        } else if (tok == "measure") {
            int q;
            while (ls >> q) c.measured.push_back(static_cast<std::uint8_t>(q));
        } else if (tok == "h" || tok == "t" || tok == "x") {
            GateKind k = tok == "h" ? GateKind::H : (tok == "t" ? GateKind::T : GateKind::X);
            c.gates.push_back({k, take_qubit(), 0});
        } else if (tok == "cnot") {
            std::uint8_t a = take_qubit(), b = take_qubit();
            c.gates.push_back({GateKind::Cnot, a, b});
        } else {
            fail("unknown directive '" + tok + "'");
        }
    }
    check_circuit(c, kMaxSimulatedQubits);
    return c;
}

std::string circuit_to_text(const GateCircuit& c) {
    std::ostringstream out;
    out << "qubits " << c.qubit_count << "\n";
    out << "measure";
    for (std::uint8_t m : c.measured) out << " " << static_cast<int>(m);
    out << "\n";
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::H: out << "h " << static_cast<int>(g.q0) << "\n"; break;
            case GateKind::T: out << "t " << static_cast<int>(g.q0) << "\n"; break;
            case GateKind::X: out << "x " << static_cast<int>(g.q0) << "\n"; break;
            case GateKind::Cnot:
                out << "cnot " << static_cast<int>(g.q0) << " " << static_cast<int>(g.q1) << "\n";
                break;
        }
    }
    return out.str();
}

// --- simulation ----------------------------------------------------------------

namespace {

using Amplitude = std::complex<double>;

std::vector<Amplitude> run_statevector(const GateCircuit& c, const BitString* input) {
    check_circuit(c, kMaxSimulatedQubits);
    if (input != nullptr && static_cast<int>(input->size()) > c.qubit_count)
        throw std::invalid_argument("simulate: input longer than the register");
    const std::size_t dim = std::size_t{1} << c.qubit_count;
    std::vector<Amplitude> state(dim, Amplitude{0.0, 0.0});
    std::size_t start = 0;
    if (input != nullptr)
        for (std::size_t i = 0; i < input->size(); ++i)
            if ((*input)[i]) start |= std::size_t{1} << i;
    state[start] = Amplitude{1.0, 0.0};

    static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
    static const Amplitude kTPhase = std::polar(1.0, std::acos(-1.0) / 4.0);
    for (const Gate& g : c.gates) {
        const std::size_t bit = std::size_t{1} << g.q0;
        switch (g.kind) {
            case GateKind::H:
                for (std::size_t i = 0; i < dim; ++i) {
                    if (i & bit) continue;
                    Amplitude a = state[i], b = state[i | bit];
                    state[i] = (a + b) * kInvSqrt2;
                    state[i | bit] = (a - b) * kInvSqrt2;
                }
                break;
            case GateKind::T:
                for (std::size_t i = 0; i < dim; ++i)
                    if (i & bit) state[i] *= kTPhase;
                break;
            case GateKind::X:
                for (std::size_t i = 0; i < dim; ++i)
                    if (!(i & bit)) std::swap(state[i], state[i | bit]);
                break;
            case GateKind::Cnot: {
                const std::size_t tbit = std::size_t{1} << g.q1;
                for (std::size_t i = 0; i < dim; ++i)
                    if ((i & bit) && !(i & tbit)) std::swap(state[i], state[i | tbit]);
                break;
            }
        }
    }
    return state;
}

}  // namespace

OutcomeDistribution simulate(const GateCircuit& c) {
    std::vector<Amplitude> state = run_statevector(c, nullptr);
    const std::size_t mc = c.measured.size();
    std::vector<double> acc(std::size_t{1} << mc, 0.0);
    for (std::size_t i = 0; i < state.size(); ++i) {
        double p = std::norm(state[i]);
        if (p == 0.0) continue;
        std::size_t key = 0;
        for (std::size_t j = 0; j < mc; ++j)
            if (i & (std::size_t{1} << c.measured[j])) key |= std::size_t{1} << j;
        acc[key] += p;
    }
    OutcomeDistribution dist;
    for (std::size_t key = 0; key < acc.size(); ++key) {
        std::string label(mc, '0');
        for (std::size_t j = 0; j < mc; ++j)
            if (key & (std::size_t{1} << j)) label[j] = '1';
        dist.probs[label] = acc[key];
    }
    return dist;
}

namespace {

double marginal_one(const std::vector<Amplitude>& state, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    double p = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (i & bit) p += std::norm(state[i]);
    return p;
}

}  // namespace

double accept_probability(const GateCircuit& c, const BitString& y) {
    if (c.measured.size() != 1)
        throw std::invalid_argument("accept_probability: expected one measured qubit");
    std::vector<Amplitude> state = run_statevector(c, &y);
    return marginal_one(state, c.measured[0]);
}

ConfidenceReadout confidence_readout(const GateCircuit& c, const BitString& y, bool chi_y) {
    if (c.measured.size() != 2)
        throw std::invalid_argument("confidence_readout: expected two measured qubits");
    std::vector<Amplitude> state = run_statevector(c, &y);
    ConfidenceReadout r;
    r.p_know = marginal_one(state, c.measured[0]);
    double p_answer_one = marginal_one(state, c.measured[1]);
    r.p_correct = chi_y ? p_answer_one : 1.0 - p_answer_one;
    return r;
}

// --- gap lemma ---------------------------------------------------------------

GapResult gap_index(const std::vector<double>& probs) {
    constexpr double kTol = 1e-12;
    if (probs.empty()) throw std::invalid_argument("gap_index: empty list");
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < -kTol) throw std::invalid_argument("gap_index: negative probability");
        if (i > 0 && probs[i] > probs[i - 1] + kTol)
            throw std::invalid_argument("gap_index: not sorted descending");
        sum += probs[i];
    }
    if (sum > 1.0 + 1e-9) throw std::invalid_argument("gap_index: probabilities exceed 1");
    const double threshold = probs[0] * probs[0] / (2.0 + probs[0]);
    const int k = static_cast<int>(probs.size());
    for (int i = 1; i <= k; ++i) {
        double next = i < k ? probs[static_cast<std::size_t>(i)] : 0.0;
        double gap = probs[static_cast<std::size_t>(i - 1)] - next;
        if (gap >= threshold - kTol) return {i, gap};
    }
    throw std::logic_error("gap_index: no qualifying gap (lemma violated)");
}

// --- amplification -----------------------------------------------------------

AmplifyOutcome amplify_distribution(const std::vector<std::pair<std::string, double>>& outcomes,
                                    const std::string& target, int n_copies, std::uint64_t seed,
                                    int trials) {
    if (n_copies < 1) throw std::invalid_argument("amplify: n_copies must be >= 1");
    if (trials < 1) throw std::invalid_argument("amplify: trials must be >= 1");

    // Keep the non-zero outcomes, most likely first, labels breaking ties.
    std::vector<std::pair<std::string, double>> dist;
    for (const auto& [label, p] : outcomes) {
        if (p < -1e-12) throw std::invalid_argument("amplify: negative probability");
        if (p > 0.0) dist.emplace_back(label, p);
    }
    std::sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    int m = -1;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i].first == target) m = static_cast<int>(i);
    if (m < 0) throw std::invalid_argument("amplify: target has probability 0");

    // The rank cut comes from the gap lemma applied from the target's rank
    // down, which guarantees the target sits inside the kept list.
    std::vector<double> tail;
    for (std::size_t i = static_cast<std::size_t>(m); i < dist.size(); ++i)
        tail.push_back(dist[i].second);
    GapResult gr = gap_index(tail);
    const int j = m + gr.index;

    std::vector<std::string> top_labels;
    for (int i = 0; i < j; ++i) top_labels.push_back(dist[static_cast<std::size_t>(i)].first);
    std::sort(top_labels.begin(), top_labels.end());
    int a = 0;
    for (std::size_t i = 0; i < top_labels.size(); ++i)
        if (top_labels[i] == target) a = static_cast<int>(i) + 1;

    const double eps = dist[static_cast<std::size_t>(m)].second;
    AmplificationPlan plan;
    plan.n_copies = n_copies;
    plan.j = j;
    plan.a = a;
    plan.two_delta = eps * eps / (2.0 + eps);
    plan.r = std::exp((plan.two_delta / 2.0) * (plan.two_delta / 2.0) / 3.0);

    std::vector<double> cdf(dist.size());
    double run = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        run += dist[i].second;
        cdf[i] = run;
    }

    int successes = 0;
    std::vector<int> counts(dist.size());
    std::vector<int> order(dist.size());
    for (int trial = 0; trial < trials; ++trial) {
        CounterRng rng(seed, static_cast<std::uint64_t>(trial) + 1);
        std::fill(counts.begin(), counts.end(), 0);
        for (int shot = 0; shot < n_copies; ++shot) {
            double u = rng.next_double() * run;  // run = total mass
            std::size_t idx = static_cast<std::size_t>(
                std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            if (idx >= dist.size()) idx = dist.size() - 1;
            ++counts[idx];
        }
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            if (counts[static_cast<std::size_t>(x)] != counts[static_cast<std::size_t>(y)])
                return counts[static_cast<std::size_t>(x)] > counts[static_cast<std::size_t>(y)];
            return dist[static_cast<std::size_t>(x)].first < dist[static_cast<std::size_t>(y)].first;
        });
        // The j most frequent observed strings, then lexicographic order.
        std::vector<std::string> picked;
        for (int i = 0; i < j && i < static_cast<int>(order.size()); ++i) {
            int idx = order[static_cast<std::size_t>(i)];
            if (counts[static_cast<std::size_t>(idx)] == 0) break;
            picked.push_back(dist[static_cast<std::size_t>(idx)].first);
        }
        std::sort(picked.begin(), picked.end());
        if (a >= 1 && a <= static_cast<int>(picked.size()) &&
            picked[static_cast<std::size_t>(a - 1)] == target)
            ++successes;
    }

    AmplifyOutcome out;
    out.plan = plan;
    out.success_estimate = static_cast<double>(successes) / static_cast<double>(trials);
    return out;
}

AmplifyOutcome amplify(const GateCircuit& c, const BitString& target, int n_copies,
                       std::uint64_t seed, int trials) {
    OutcomeDistribution dist = simulate(c);
    std::vector<std::pair<std::string, double>> outcomes(dist.probs.begin(), dist.probs.end());
    return amplify_distribution(outcomes, target.to_string(), n_copies, seed, trials);
}

// --- predicates ----------------------------------------------------------------

bool circuit_outputs_with_probability(const GateCircuit& c, const BitString& x, double epsilon) {
    if (c.measured.size() != x.size()) return false;
    OutcomeDistribution dist = simulate(c);
    auto it = dist.probs.find(x.to_string());
    return it != dist.probs.end() && it->second >= epsilon - 1e-12;
}

bool circuit_distinguishes(const GateCircuit& c, const BitString& x,
                           const std::vector<BitString>& universe, double epsilon) {
    if (c.measured.size() != 1) return false;
    for (const auto& y : universe) {
        if (static_cast<int>(y.size()) > c.qubit_count) return false;
        double p = accept_probability(c, y);
        if (y == x ? p <= 0.5 + epsilon : p >= 0.5 - epsilon) return false;
    }
    return true;
}

bool circuit_decides_confidently(const GateCircuit& c, const BitString& y, bool chi_y,
                                 double epsilon) {
    if (c.measured.size() != 2 || static_cast<int>(y.size()) > c.qubit_count) return false;
    ConfidenceReadout r = confidence_readout(c, y, chi_y);
    return r.p_know > 0.5 + epsilon && r.p_correct > 0.5 + epsilon;
}

bool circuit_quantum_consistent(const GateCircuit& c, const LanguageOracle& language,
                                const std::vector<BitString>& universe, double epsilon) {
    if (c.measured.size() != 2) return false;
    for (const auto& y : universe) {
        if (static_cast<int>(y.size()) > c.qubit_count) return false;
        ConfidenceReadout r = confidence_readout(c, y, language.chi(y));
        bool knows = r.p_know > 0.5 + epsilon;
        bool refuses = (1.0 - r.p_know) > 0.5 + epsilon;
        if (knows) {
            if (r.p_correct <= 0.5 + epsilon) return false;
        } else if (!refuses) {
            return false;  // neither branch is confident
        }
    }
    return true;
}

// --- searches ------------------------------------------------------------------

namespace {

struct QChampion {
    int len = -1;
    std::uint64_t bits = 0;
    void offer(int l, std::uint64_t u) {
        if (len == -1) {
            len = l;
            bits = u;
        } else if (l == len) {
            std::uint64_t d = u ^ bits;
            if (d != 0 && ((u >> std::countr_zero(d)) & 1) == 0) bits = u;
        }
    }
    bool filled() const { return len >= 0; }
};

ComplexityValue q_to_value(const QChampion& ch, int cap) {
    ComplexityValue v;
    v.search_cap = cap;
    if (ch.filled()) {
        v.value = ch.len;
        v.witness = BitString::from_word(ch.bits, static_cast<std::size_t>(ch.len));
    }
    return v;
}

void check_epsilon_interval(double epsilon, double lo, double hi, const char* what) {
    if (!(epsilon > lo) || !(epsilon < hi))
        throw std::invalid_argument(std::string(what) + ": epsilon outside its range");
}

/// Shared scan skeleton: enumerate programs, hand each emitted, decodable
/// circuit to `consider`, stop at a length boundary once `done` says so.
template <class Consider, class Done>
void scan_circuit_emitters(const SearchLimits& limits, Consider&& consider, Done&& done) {
    if (limits.max_program_len < 0 || limits.max_program_len > kHardMaxProgramLen)
        throw std::invalid_argument("max_program_len outside engine range");
    for (int len = 0; len <= limits.max_program_len; ++len) {
        std::uint64_t count = std::uint64_t{1} << len;
        for (std::uint64_t u = 0; u < count; ++u) {
            const std::uint64_t program[2] = {u, 0};
            Instruction code[16];
            int n = detail::decode_into(program, static_cast<std::uint32_t>(len), code, 16);
            if (n < 0) continue;
            std::uint64_t emitted[2] = {0, 0};
            std::uint32_t out_len = 0;
            if (!detail::run_generator_collect(code, n, limits.step_budget.max_steps, &emitted[0],
                                               &out_len, 64))
                continue;
            auto circuit = detail::decode_circuit_raw(emitted, out_len);
            if (!circuit) continue;
            consider(*circuit, len, u);
        }
        if (done()) break;
    }
}

}  // namespace

ComplexityValue qc_t(const BitString& x, double epsilon, const SearchLimits& limits) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("qc_t: epsilon outside (0, 1]");
    QChampion best;
    scan_circuit_emitters(
        limits,
        [&](const GateCircuit& c, int len, std::uint64_t u) {
            if (circuit_outputs_with_probability(c, x, epsilon)) best.offer(len, u);
        },
        [&] { return best.filled(); });
    return q_to_value(best, limits.max_program_len);
}

QuantumBatchResult quantum_batch_search(const SearchLimits& limits, double epsilon,
                                        const std::vector<LanguageOracle>& languages,
                                        bool want_qc, bool want_qcd) {
    std::vector<BitString> members = universe_members(limits.universe);
    const int U = static_cast<int>(members.size());
    std::unordered_map<std::string, int> label_index;
    for (int i = 0; i < U; ++i) label_index[members[static_cast<std::size_t>(i)].to_string()] = i;
    std::vector<std::vector<bool>> chi(languages.size());
    for (std::size_t l = 0; l < languages.size(); ++l)
        for (const auto& y : members) chi[l].push_back(languages[l].chi(y));

    std::vector<QChampion> qc_cells(want_qc ? members.size() : 0);
    std::vector<QChampion> qcd_cells(want_qcd ? members.size() : 0);
    std::vector<std::vector<QChampion>> qic_cells(languages.size(),
                                                  std::vector<QChampion>(members.size()));

    auto all_filled = [&] {
        for (const auto& ch : qc_cells)
            if (!ch.filled()) return false;
        for (const auto& ch : qcd_cells)
            if (!ch.filled()) return false;
        for (const auto& row : qic_cells)
            for (const auto& ch : row)
                if (!ch.filled()) return false;
        return true;
    };

    scan_circuit_emitters(
        limits,
        [&](const GateCircuit& c, int len, std::uint64_t u) {
            if (want_qc && !members.empty() &&
                c.measured.size() == members[0].size() &&
                limits.universe.kind == UniverseSpec::Kind::SameLength) {
                OutcomeDistribution dist = simulate(c);
                for (const auto& [label, p] : dist.probs) {
                    if (p < epsilon - 1e-12) continue;
                    auto it = label_index.find(label);
                    if (it != label_index.end())
                        qc_cells[static_cast<std::size_t>(it->second)].offer(len, u);
                }
            }
            bool fits_inputs = true;
            for (const auto& y : members)
                if (static_cast<int>(y.size()) > c.qubit_count) fits_inputs = false;
            if (!fits_inputs) return;
            if (want_qcd && c.measured.size() == 1) {
                int accepted = 0, rejected = 0, accept_idx = -1;
                for (int y = 0; y < U; ++y) {
                    double p = accept_probability(c, members[static_cast<std::size_t>(y)]);
                    if (p > 0.5 + epsilon) {
                        ++accepted;
                        accept_idx = y;
                    } else if (p < 0.5 - epsilon) {
                        ++rejected;
                    }
                }
                if (accepted == 1 && rejected == U - 1)
                    qcd_cells[static_cast<std::size_t>(accept_idx)].offer(len, u);
            }
            if (!languages.empty() && c.measured.size() == 2) {
                for (std::size_t l = 0; l < languages.size(); ++l) {
                    bool consistent = true;
                    std::vector<bool> confident(static_cast<std::size_t>(U), false);
                    for (int y = 0; y < U && consistent; ++y) {
                        ConfidenceReadout r = confidence_readout(
                            c, members[static_cast<std::size_t>(y)], chi[l][static_cast<std::size_t>(y)]);
                        bool knows = r.p_know > 0.5 + epsilon;
                        bool refuses = (1.0 - r.p_know) > 0.5 + epsilon;
                        if (knows && r.p_correct > 0.5 + epsilon)
                            confident[static_cast<std::size_t>(y)] = true;
                        else if (!refuses)
                            consistent = false;
                    }
                    if (!consistent) continue;
                    for (int y = 0; y < U; ++y)
                        if (confident[static_cast<std::size_t>(y)])
                            qic_cells[l][static_cast<std::size_t>(y)].offer(len, u);
                }
            }
        },
        all_filled);

    QuantumBatchResult result;
    result.members = std::move(members);
    int cap = limits.max_program_len;
    for (const auto& ch : qc_cells) result.qc.push_back(q_to_value(ch, cap));
    for (const auto& ch : qcd_cells) result.qcd.push_back(q_to_value(ch, cap));
    for (const auto& row : qic_cells) {
        std::vector<ComplexityValue> vals;
        for (const auto& ch : row) vals.push_back(q_to_value(ch, cap));
        result.qic.push_back(std::move(vals));
    }
    return result;
}

ComplexityValue qcd_t(const BitString& x, double epsilon, const SearchLimits& limits) {
    check_epsilon_interval(epsilon, 0.0, 0.5, "qcd_t");
    if (!limits.universe.contains(x)) throw std::invalid_argument("qcd_t: x not in universe");
    QuantumBatchResult r = quantum_batch_search(limits, epsilon, {}, false, true);
    for (std::size_t i = 0; i < r.members.size(); ++i)
        if (r.members[i] == x) return r.qcd[i];
    throw std::logic_error("qcd_t: member not found");
}

ComplexityValue qic_t(const BitString& x, const LanguageOracle& language, double epsilon,
                      const SearchLimits& limits) {
    check_epsilon_interval(epsilon, 0.0, 0.5, "qic_t");
    if (!limits.universe.contains(x)) throw std::invalid_argument("qic_t: x not in universe");
    QuantumBatchResult r = quantum_batch_search(limits, epsilon, {language}, false, false);
    for (std::size_t i = 0; i < r.members.size(); ++i)
        if (r.members[i] == x) return r.qic[0][i];
    throw std::logic_error("qic_t: member not found");
}

// --- embedding -----------------------------------------------------------------

BitString literal_emitter(const BitString& bits) {
    std::vector<Instruction> code;
    for (std::size_t i = 0; i < bits.size(); ++i)
        code.push_back({bits[i] ? Op::Emit1 : Op::Emit0, 0, 0, 0});
    return encode(code);
}

namespace {

struct AffineForm {
    bool constant = false;
    std::uint32_t term_mask = 0;  // bit i set: y_i participates in the XOR

    bool eval(const BitString& y) const {
        bool v = constant;
        for (std::size_t i = 0; i < y.size(); ++i)
            if ((term_mask >> i) & 1) v ^= y[i];
        return v;
    }
};

/// Fits f(y) = c xor (xor of selected bits) against partial constraints
/// (-1 = unconstrained). Universe members must share one length n <= 20.
std::optional<AffineForm> fit_affine(const std::vector<BitString>& universe,
                                     const std::vector<int>& constraint) {
    if (universe.empty()) return std::nullopt;
    std::size_t n = universe[0].size();
    for (const auto& y : universe)
        if (y.size() != n) return std::nullopt;
    if (n > 20) return std::nullopt;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        for (int c = 0; c <= 1; ++c) {
            AffineForm f{c == 1, mask};
            bool ok = true;
            for (std::size_t i = 0; i < universe.size() && ok; ++i) {
                if (constraint[i] == -1) continue;
                if (f.eval(universe[i]) != (constraint[i] == 1)) ok = false;
            }
            if (ok) return f;
        }
    }
    return std::nullopt;
}

/// Emits gates computing an affine form into a fresh target qubit.
void emit_affine(GateCircuit& c, const AffineForm& f, std::uint8_t target) {
    if (f.constant) c.gates.push_back({GateKind::X, target, 0});
    for (std::uint8_t i = 0; i < 20; ++i)
        if ((f.term_mask >> i) & 1) c.gates.push_back({GateKind::Cnot, i, target});
}

}  // namespace

std::optional<EmbeddedAcceptor> embed_distinguisher(const BitString& program, const BitString& x,
                                                    const std::vector<BitString>& universe,
                                                    ExecutionBudget budget) {
    std::vector<int> table;
    for (const auto& y : universe) {
        RunOutcome out = run_acceptor(program, y, budget);
        if (out.kind != RunOutcome::Kind::HaltedVerdict || out.verdict == Verdict::Unknown)
            return std::nullopt;  // a distinguisher must answer everywhere
        table.push_back(out.verdict == Verdict::Accept ? 1 : 0);
    }
    auto form = fit_affine(universe, table);
    if (!form) return std::nullopt;

    std::size_t n = universe[0].size();
    EmbeddedAcceptor e;
    if (!form->constant && std::popcount(form->term_mask) == 1) {
        // A single input bit decides: measure it directly.
        e.circuit.qubit_count = static_cast<int>(n);
        e.circuit.measured = {static_cast<std::uint8_t>(std::countr_zero(form->term_mask))};
    } else {
        e.circuit.qubit_count = static_cast<int>(n) + 1;
        std::uint8_t ans = static_cast<std::uint8_t>(n);
        emit_affine(e.circuit, *form, ans);
        e.circuit.measured = {ans};
    }
    if (!circuit_distinguishes(e.circuit, x, universe, kDefaultQuantumEpsilon))
        return std::nullopt;
    e.emitter = literal_emitter(encode_circuit(e.circuit));
    return e;
}

std::optional<EmbeddedAcceptor> embed_decider(const BitString& program,
                                              const LanguageOracle& language,
                                              const std::vector<BitString>& universe,
                                              ExecutionBudget budget) {
    std::vector<int> decided, answer;
    for (const auto& y : universe) {
        RunOutcome out = run_acceptor(program, y, budget);
        Verdict v = out.kind == RunOutcome::Kind::HaltedVerdict ? out.verdict : Verdict::Unknown;
        if (v == Verdict::Unknown) {
            decided.push_back(0);
            answer.push_back(-1);
        } else {
            if ((v == Verdict::Accept) != language.chi(y)) return std::nullopt;  // inconsistent
            decided.push_back(1);
            answer.push_back(v == Verdict::Accept ? 1 : 0);
        }
    }
    auto know_form = fit_affine(universe, decided);
    auto answer_form = fit_affine(universe, answer);
    if (!know_form || !answer_form) return std::nullopt;

    std::size_t n = universe[0].size();
    EmbeddedAcceptor e;
    e.circuit.qubit_count = static_cast<int>(n) + 2;
    std::uint8_t conf = static_cast<std::uint8_t>(n);
    std::uint8_t ans = static_cast<std::uint8_t>(n + 1);
    emit_affine(e.circuit, *know_form, conf);
    emit_affine(e.circuit, *answer_form, ans);
    e.circuit.measured = {conf, ans};
    if (!circuit_quantum_consistent(e.circuit, language, universe, kDefaultQuantumEpsilon))
        return std::nullopt;
    e.emitter = literal_emitter(encode_circuit(e.circuit));
    return e;
}

}  // namespace queasylab
