#include "queasylab/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "queasylab/machine.hpp"
#include "queasylab/quantum.hpp"

namespace queasylab {

// --- compressor -----------------------------------------------------------
//
// Token stream, all fields bit-level:
//   header: gamma(|x| + 1)
//   literal run: 0, gamma(len), len raw bits
//   match:       1, gamma(len), offset-1 in bit_width(min(pos,4096)-1) bits
// Matches are at least 24 bits long and reach back at most 4096 bits; the
// most recent position with the same 24-bit window is the only candidate.

namespace {

constexpr std::size_t kMinMatch = 24;
constexpr std::size_t kWindow = 4096;

void append_gamma(BitString& out, std::uint64_t v) {
    int n = std::bit_width(v);  // v >= 1
    for (int i = 0; i < n - 1; ++i) out.push_back(false);
    for (int i = n - 1; i >= 0; --i) out.push_back(((v >> i) & 1) != 0);
}

struct BitCursor {
    const BitString* bits;
    std::size_t pos = 0;

    bool take() {
        if (pos >= bits->size()) throw std::invalid_argument("decompress: truncated stream");
        return (*bits)[pos++];
    }
    std::uint64_t take_gamma() {
        int zeros = 0;
        while (!take()) ++zeros;
        std::uint64_t v = 1;
        for (int i = 0; i < zeros; ++i) v = (v << 1) | (take() ? 1 : 0);
        return v;
    }
    std::uint64_t take_field(int width) {
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(take() ? 1 : 0) << i;
        return v;
    }
};

inline std::uint32_t window_key(const BitString& x, std::size_t pos) {
    std::uint32_t k = 0;
    for (std::size_t i = 0; i < kMinMatch; ++i)
        k = (k << 1) | (x[pos + i] ? 1u : 0u);
    return k;
}

void append_offset(BitString& out, std::size_t pos, std::size_t offset) {
    std::uint64_t range = std::min<std::uint64_t>(pos, kWindow);
    int width = std::bit_width(range - 1);
    for (int i = 0; i < width; ++i) out.push_back((((offset - 1) >> i) & 1) != 0);
}

}  // namespace

BitString compress_bits(const BitString& x) {
    BitString out;
    append_gamma(out, static_cast<std::uint64_t>(x.size()) + 1);

    std::unordered_map<std::uint32_t, std::size_t> recent;
    std::size_t pos = 0;
    std::size_t literal_start = 0;

    auto flush_literals = [&](std::size_t end) {
        std::size_t i = literal_start;
        while (i < end) {
            std::size_t len = end - i;
            out.push_back(false);
            append_gamma(out, len);
            for (std::size_t j = 0; j < len; ++j) out.push_back(x[i + j]);
            i = end;
        }
        literal_start = end;
    };

    while (pos < x.size()) {
        std::size_t match_len = 0, match_offset = 0;
        if (pos + kMinMatch <= x.size() && pos >= 1) {
            auto it = recent.find(window_key(x, pos));
            if (it != recent.end() && pos - it->second <= kWindow) {
                std::size_t cand = it->second;
                std::size_t len = 0;
                while (pos + len < x.size() && x[cand + len] == x[pos + len]) ++len;
                if (len >= kMinMatch) {
                    match_len = len;
                    match_offset = pos - cand;
                }
            }
        }
        if (match_len > 0) {
            flush_literals(pos);
            out.push_back(true);
            append_gamma(out, match_len);
            append_offset(out, pos, match_offset);
            for (std::size_t j = 0; j < match_len && pos + j + kMinMatch <= x.size(); ++j)
                recent[window_key(x, pos + j)] = pos + j;
            pos += match_len;
            literal_start = pos;
        } else {
            if (pos + kMinMatch <= x.size()) recent[window_key(x, pos)] = pos;
            ++pos;
        }
    }
    flush_literals(x.size());
    return out;
}

BitString decompress_bits(const BitString& compressed) {
    BitCursor in{&compressed};
    std::uint64_t total = in.take_gamma() - 1;
    BitString out;
    while (out.size() < total) {
        bool is_match = in.take();
        std::uint64_t len = in.take_gamma();
        if (out.size() + len > total) throw std::invalid_argument("decompress: overrun");
        if (is_match) {
            std::uint64_t range = std::min<std::uint64_t>(out.size(), kWindow);
            if (range == 0) throw std::invalid_argument("decompress: match before any output");
            int width = std::bit_width(range - 1);
            std::uint64_t offset = in.take_field(width) + 1;
            if (offset > out.size()) throw std::invalid_argument("decompress: offset too large");
            for (std::uint64_t j = 0; j < len; ++j)
                out.push_back(out[out.size() - offset]);  // may overlap forward
        } else {
            for (std::uint64_t j = 0; j < len; ++j) out.push_back(in.take());
        }
    }
    return out;
}

int compressor_cd_proxy(const BitString& x) {
    return static_cast<int>(compress_bits(x).size());
}

// --- queasiness quantities ---------------------------------------------------

std::optional<int> delta_ic(const ComplexityValue& ic, const ComplexityValue& qic) {
    if (ic.censored() || qic.censored()) return std::nullopt;
    return *ic.value - *qic.value;
}

std::optional<double> ric(const ComplexityValue& ic, const ComplexityValue& qic) {
    if (ic.censored() || qic.censored()) return std::nullopt;
    if (*ic.value < 1) throw std::invalid_argument("ric: ic must be >= 1");
    return 1.0 - static_cast<double>(*qic.value) / static_cast<double>(*ic.value);
}

const char* to_string(QueasyClass c) {
    switch (c) {
        case QueasyClass::Easy: return "easy";
        case QueasyClass::Queasy: return "queasy";
        case QueasyClass::Hard: return "hard";
        case QueasyClass::Indeterminate: return "indeterminate";
    }
    return "?";
}

QueasyClass classify_queasy(const ComplexityValue& ic, const ComplexityValue& qic,
                            const ComplexityValue& cd, int margin) {
    if (ic.censored() || qic.censored()) return QueasyClass::Indeterminate;
    int icv = *ic.value, qicv = *qic.value;
    if (qicv + margin < icv) return QueasyClass::Queasy;
    if (icv <= margin && qicv <= margin) return QueasyClass::Easy;
    if (!cd.censored() && std::abs(icv - *cd.value) <= margin &&
        std::abs(qicv - *cd.value) <= margin)
        return QueasyClass::Hard;
    return QueasyClass::Indeterminate;
}

// --- portfolio proxy -----------------------------------------------------------

void validate_portfolio(const ProxyConfig& config, const std::vector<CnfFormula>& validation) {
    for (const auto& member : config.portfolio) {
        if (member.description_length <= 0)
            throw std::invalid_argument("portfolio: non-positive description length");
        for (const auto& f : validation) {
            SolverAnswer a = sat_decide_budgeted(f, member.decision_budget);
            if (a == SolverAnswer::Bot) continue;
            if ((a == SolverAnswer::Sat) != sat_brute_force(f))
                throw std::invalid_argument("portfolio: member '" + member.id +
                                            "' contradicts the oracle on validation");
        }
    }
}

ProxyIcResult solver_ic_proxy(const CnfFormula& f, const ProxyConfig& config) {
    if (config.portfolio.empty()) throw std::invalid_argument("solver_ic_proxy: empty portfolio");
    ProxyIcResult best;
    for (const auto& member : config.portfolio) {
        if (sat_decide_budgeted(f, member.decision_budget) == SolverAnswer::Bot) continue;
        if (!best.value || member.description_length < *best.value) {
            best.value = member.description_length;
            best.decider_id = member.id;
        }
    }
    return best;
}

// --- landscape ------------------------------------------------------------------

namespace {

std::string format_budgets(const std::string& t, const std::string& t_prime) {
    return "t=" + t + ";t'=" + t_prime;
}

std::string censored_flags(const QueasinessRecord& r) {
    std::string s;
    auto add = [&s](const char* name) {
        if (!s.empty()) s += ";";
        s += name;
    };
    if (r.c.censored()) add("c");
    if (r.cd.censored()) add("cd");
    if (r.ic.censored()) add("ic");
    if (r.qic.censored()) add("qic");
    return s;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::vector<QueasinessRecord> landscape_exact(const std::vector<BitString>& instances,
                                              const LanguageOracle& language,
                                              const ExactLandscapeConfig& config) {
    // Group by length: one batch enumeration serves every instance of a size.
    std::map<std::size_t, std::vector<std::size_t>> by_length;
    for (std::size_t i = 0; i < instances.size(); ++i) by_length[instances[i].size()].push_back(i);

    std::vector<QueasinessRecord> records(instances.size());
    for (const auto& [len, idxs] : by_length) {
        SearchLimits classical;
        classical.max_program_len = config.max_program_len;
        classical.step_budget = config.classical_budget;
        classical.universe = UniverseSpec::same_length(static_cast<int>(len));
        BatchRequest req;
        req.limits = classical;
        req.languages = {language};
        BatchResult classical_result = batch_search(req);

        SearchLimits quantum = classical;
        quantum.step_budget = config.quantum_budget;
        QuantumBatchResult quantum_result =
            quantum_batch_search(quantum, config.epsilon, {language}, false, false);

        std::unordered_map<std::string, std::size_t> member_index;
        for (std::size_t i = 0; i < classical_result.members.size(); ++i)
            member_index[classical_result.members[i].to_string()] = i;

        for (std::size_t idx : idxs) {
            const BitString& x = instances[idx];
            std::size_t mi = member_index.at(x.to_string());
            QueasinessRecord r;
            r.instance_id = x.size() == 0 ? "-" : x.to_string();
            r.language = language.name;
            r.mode = "exact";
            r.n = static_cast<int>(x.size());
            r.c = classical_result.c[mi];
            r.cd = classical_result.cd[mi];
            r.ic = classical_result.ic[0][mi];
            r.qic = quantum_result.qic[0][mi];
            r.delta = delta_ic(r.ic, r.qic);
            r.ric_value = ric(r.ic, r.qic);
            if (r.ric_value && *r.ric_value < 0.0) r.anomaly = true;
            r.classification = classify_queasy(r.ic, r.qic, r.cd, config.margin);
            r.seed = config.seed;
            r.budgets = format_budgets(std::to_string(config.classical_budget.max_steps),
                                       std::to_string(config.quantum_budget.max_steps));
            records[idx] = std::move(r);
        }
    }
    return records;
}

std::vector<QueasinessRecord> landscape_proxy(
    const std::vector<std::pair<std::string, CnfFormula>>& instances, const ProxyConfig& config,
    std::uint64_t seed) {
    std::vector<QueasinessRecord> records;
    records.reserve(instances.size());
    std::uint64_t max_budget = 0;
    for (const auto& m : config.portfolio) max_budget = std::max(max_budget, m.decision_budget);
    for (const auto& [id, formula] : instances) {
        QueasinessRecord r;
        r.instance_id = id;
        r.language = "sat";
        r.mode = "proxy";
        r.n = formula.variable_count;
        r.seed = seed;
        r.budgets = format_budgets(std::to_string(max_budget) + "dec", "declared");
        // A per-instance failure yields a censored row, and the run goes on.
        try {
            ProxyIcResult ic = solver_ic_proxy(formula, config);
            if (ic.value) {
                r.ic.value = *ic.value;
                r.ic.witness = std::nullopt;
            }
            BitString encoding;
            for (char ch : emit_dimacs(formula))
                for (int b = 7; b >= 0; --b)
                    encoding.push_back(((static_cast<unsigned char>(ch) >> b) & 1) != 0);
            r.cd.value = compressor_cd_proxy(encoding);
            if (config.declared_qic) r.qic.value = *config.declared_qic;
            r.delta = delta_ic(r.ic, r.qic);
            r.ric_value = ric(r.ic, r.qic);
            if ((r.delta && *r.delta < 0) || (r.ric_value && *r.ric_value < 0.0)) r.anomaly = true;
            r.classification = classify_queasy(r.ic, r.qic, r.cd, config.margin);
        } catch (const std::exception&) {
            r.classification = QueasyClass::Indeterminate;
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::string records_to_csv(const std::vector<QueasinessRecord>& records) {
    std::ostringstream out;
    out << "instance_id,language,mode,n,ic,qic,cd,c,delta_ic,ric,class,censored,seed,budgets\n";
    for (const auto& r : records) {
        auto cell = [](const ComplexityValue& v) {
            return v.censored() ? std::string() : std::to_string(*v.value);
        };
        out << r.instance_id << "," << r.language << "," << r.mode << "," << r.n << ","
            << cell(r.ic) << "," << cell(r.qic) << "," << cell(r.cd) << "," << cell(r.c) << ",";
        if (r.delta) out << *r.delta;
        out << ",";
        if (r.ric_value) out << format_double(*r.ric_value);
        out << "," << to_string(r.classification);
        if (r.anomaly) out << "!";
        out << "," << censored_flags(r) << "," << r.seed << "," << r.budgets << "\n";
    }
    return out.str();
}

}  // namespace queasylab
