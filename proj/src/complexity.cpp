#include "queasylab/complexity.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace queasylab {

namespace {

constexpr int kMaxUniverseBits = 16;

/// Lexicographic order on equal-length packed programs: the first differing
/// stream bit decides, and stream bit i is word bit i.
inline bool packed_lex_less(std::uint64_t a, std::uint64_t b) {
    std::uint64_t d = a ^ b;
    if (d == 0) return false;
    return ((a >> std::countr_zero(d)) & 1) == 0;
}

struct Champion {
    int len = -1;
    std::uint64_t bits = 0;

    bool filled() const { return len >= 0; }
    void offer(int candidate_len, std::uint64_t candidate) {
        if (len == -1) {
            len = candidate_len;
            bits = candidate;
        } else if (candidate_len == len && packed_lex_less(candidate, bits)) {
            bits = candidate;
        }
        // Lengths ascend across the scan, so a filled champion from an
        // earlier length is final.
    }
};

ComplexityValue to_value(const Champion& ch, int cap) {
    ComplexityValue v;
    v.search_cap = cap;
    if (ch.filled()) {
        v.value = ch.len;
        v.witness = BitString::from_word(ch.bits, static_cast<std::size_t>(ch.len));
    }
    return v;
}

std::uint64_t pack_stream(const BitString& s) {
    if (s.size() > 64) throw std::invalid_argument("pack_stream: too long");
    return s.size() == 0 ? 0 : s.words()[0];
}

struct UniverseTable {
    std::vector<BitString> members;
    std::vector<std::uint64_t> words;  // packed stream form
    std::vector<std::uint32_t> lens;
};

UniverseTable build_universe(const UniverseSpec& u) {
    if (u.n < 0) throw std::invalid_argument("universe: negative length");
    if (u.n > kMaxUniverseBits) throw std::invalid_argument("universe: too large for enumeration");
    UniverseTable t;
    t.members = universe_members(u);
    t.words.reserve(t.members.size());
    t.lens.reserve(t.members.size());
    for (const auto& m : t.members) {
        t.words.push_back(pack_stream(m));
        t.lens.push_back(static_cast<std::uint32_t>(m.size()));
    }
    return t;
}

void check_limits(const SearchLimits& limits) {
    if (limits.max_program_len < 0 || limits.max_program_len > kHardMaxProgramLen)
        throw std::invalid_argument("max_program_len outside [0, " +
                                    std::to_string(kHardMaxProgramLen) + "]");
}

// Read-only tables shared by all scan workers.
struct ScanTables {
    std::uint64_t budget = 0;
    int universe_size = 0;
    const std::uint64_t* in_words = nullptr;
    const std::uint32_t* in_lens = nullptr;
    std::vector<std::vector<std::uint8_t>> chi;  // [language][member]
    bool want_c = false;
    bool want_acceptors = false;
    std::unordered_map<std::uint64_t, int> target_index;  // (len<<32 | bits) -> c cell
    std::uint32_t max_target_len = 0;
};

struct ScanCells {
    std::vector<Champion> c;
    std::vector<Champion> cd;
    std::vector<std::vector<Champion>> ic;  // [language][member]
    std::vector<std::uint8_t> verdicts;     // scratch, universe-sized

    void init(const ScanTables& t) {
        c.assign(t.target_index.size(), {});
        cd.assign(static_cast<std::size_t>(t.universe_size), {});
        ic.assign(t.chi.size(), std::vector<Champion>(static_cast<std::size_t>(t.universe_size)));
        verdicts.assign(static_cast<std::size_t>(t.universe_size), 2);
    }

    void merge_from(const ScanCells& other) {
        auto merge = [](Champion& into, const Champion& from) {
            if (from.filled()) into.offer(from.len, from.bits);
        };
        for (std::size_t i = 0; i < c.size(); ++i) merge(c[i], other.c[i]);
        for (std::size_t i = 0; i < cd.size(); ++i) merge(cd[i], other.cd[i]);
        for (std::size_t l = 0; l < ic.size(); ++l)
            for (std::size_t i = 0; i < ic[l].size(); ++i) merge(ic[l][i], other.ic[l][i]);
    }

    bool all_filled() const {
        for (const auto& ch : c)
            if (!ch.filled()) return false;
        for (const auto& ch : cd)
            if (!ch.filled()) return false;
        for (const auto& lang : ic)
            for (const auto& ch : lang)
                if (!ch.filled()) return false;
        return true;
    }
};

inline void scan_program(const ScanTables& t, ScanCells& s, int len, std::uint64_t u) {
    const std::uint64_t program[2] = {u, 0};  // second word keeps field reads in bounds
    Instruction code[16];
    int n = detail::decode_into(program, static_cast<std::uint32_t>(len), code, 16);
    if (n < 0) return;

    if (t.want_c) {
        std::uint64_t out_bits = 0;
        std::uint32_t out_len = 0;
        if (detail::run_generator_collect(code, n, t.budget, &out_bits, &out_len,
                                          t.max_target_len)) {
            auto it = t.target_index.find((static_cast<std::uint64_t>(out_len) << 32) | out_bits);
            if (it != t.target_index.end()) s.c[static_cast<std::size_t>(it->second)].offer(len, u);
        }
    }

    if (!t.want_acceptors) return;
    const int U = t.universe_size;
    int accepts = 0, rejects = 0, accept_idx = -1;
    if (detail::input_oblivious(code, n)) {
        static const std::uint64_t kNoInput = 0;
        std::uint8_t v = detail::run_acceptor_verdict(code, n, &kNoInput, 0, t.budget);
        for (int y = 0; y < U; ++y) s.verdicts[static_cast<std::size_t>(y)] = v;
        if (v == 1) {
            accepts = U;
            accept_idx = 0;
        } else if (v == 0) {
            rejects = U;
        }
    } else {
        for (int y = 0; y < U; ++y) {
            std::uint8_t v = detail::run_acceptor_verdict(code, n, &t.in_words[y], t.in_lens[y],
                                                          t.budget);
            s.verdicts[static_cast<std::size_t>(y)] = v;
            if (v == 1) {
                ++accepts;
                accept_idx = y;
            } else if (v == 0) {
                ++rejects;
            }
        }
    }

    if (!s.cd.empty() && accepts == 1 && rejects == U - 1)
        s.cd[static_cast<std::size_t>(accept_idx)].offer(len, u);

    for (std::size_t l = 0; l < t.chi.size(); ++l) {
        const std::uint8_t* chi = t.chi[l].data();
        bool consistent = true;
        for (int y = 0; y < U; ++y) {
            std::uint8_t v = s.verdicts[static_cast<std::size_t>(y)];
            if (v != 2 && v != chi[y]) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        for (int y = 0; y < U; ++y) {
            std::uint8_t v = s.verdicts[static_cast<std::size_t>(y)];
            if (v != 2) s.ic[l][static_cast<std::size_t>(y)].offer(len, u);
        }
    }
}

/// Runs the full scan: every program of length 0..max_len, length by length,
/// stopping early once every requested cell is filled. Lengths with at least
/// 2^20 programs are split across workers; the merge keeps the
/// (length, lex) minimum, so results are schedule-independent.
void run_scan(const ScanTables& t, ScanCells& s, int max_len) {
    int workers = worker_count();
    for (int len = 0; len <= max_len; ++len) {
        std::uint64_t count = std::uint64_t{1} << len;
        if (workers > 1 && count >= (std::uint64_t{1} << 20)) {
            std::vector<ScanCells> locals(static_cast<std::size_t>(workers));
            std::vector<std::thread> pool;
            std::uint64_t chunk = count / static_cast<std::uint64_t>(workers) + 1;
            for (int w = 0; w < workers; ++w) {
                locals[static_cast<std::size_t>(w)].init(t);
                std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
                std::uint64_t hi = std::min(count, lo + chunk);
                pool.emplace_back([&t, &locals, w, len, lo, hi]() {
                    ScanCells& mine = locals[static_cast<std::size_t>(w)];
                    for (std::uint64_t u = lo; u < hi; ++u) scan_program(t, mine, len, u);
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& local : locals) s.merge_from(local);
        } else {
            for (std::uint64_t u = 0; u < count; ++u) scan_program(t, s, len, u);
        }
        if (s.all_filled()) break;
    }
}

}  // namespace

std::vector<BitString> universe_members(const UniverseSpec& u) {
    std::vector<BitString> out;
    int lo = u.kind == UniverseSpec::Kind::SameLength ? u.n : 0;
    for (int len = lo; len <= u.n; ++len) {
        std::uint64_t count = std::uint64_t{1} << len;
        for (std::uint64_t v = 0; v < count; ++v)
            out.push_back(BitString::from_value(v, static_cast<std::size_t>(len)));
    }
    return out;
}

int worker_count() {
    if (const char* env = std::getenv("QUEASYLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return std::min(v, 64);
    }
    return 1;
}

bool chain_violation(const ComplexityValue& lhs, const ComplexityValue& rhs, int slack) {
    if (rhs.censored()) return false;  // the bound is above anything observable
    if (!lhs.censored()) return *lhs.value > *rhs.value + slack;
    // lhs exceeds its cap; a violation is visible when the bound fits under it.
    return *rhs.value + slack <= lhs.search_cap;
}

ComplexityValue c_t(const BitString& x, const SearchLimits& limits) {
    check_limits(limits);
    if (x.empty()) throw std::invalid_argument("c_t: x must be non-empty");
    if (x.size() > 64) throw std::invalid_argument("c_t: x too long");
    std::uint64_t target = pack_stream(x);
    std::uint32_t target_len = static_cast<std::uint32_t>(x.size());
    Champion best;
    for (int len = 0; len <= limits.max_program_len; ++len) {
        std::uint64_t count = std::uint64_t{1} << len;
        for (std::uint64_t u = 0; u < count; ++u) {
            const std::uint64_t program[2] = {u, 0};
            Instruction code[16];
            int n = detail::decode_into(program, static_cast<std::uint32_t>(len), code, 16);
            if (n < 0) continue;
            if (detail::run_generator_matches(code, n, limits.step_budget.max_steps, &target,
                                              target_len))
                best.offer(len, u);
        }
        if (best.filled()) break;
    }
    return to_value(best, limits.max_program_len);
}

BatchResult batch_search(const BatchRequest& request) {
    check_limits(request.limits);
    UniverseTable universe = build_universe(request.limits.universe);

    ScanTables t;
    t.budget = request.limits.step_budget.max_steps;
    t.universe_size = static_cast<int>(universe.members.size());
    t.in_words = universe.words.data();
    t.in_lens = universe.lens.data();
    t.want_c = request.want_c;
    t.want_acceptors = request.want_cd || !request.languages.empty();
    for (const auto& lang : request.languages) {
        std::vector<std::uint8_t> chi;
        chi.reserve(universe.members.size());
        for (const auto& m : universe.members) chi.push_back(lang.chi(m) ? 1 : 0);
        t.chi.push_back(std::move(chi));
    }
    if (request.want_c) {
        for (int i = 0; i < t.universe_size; ++i) {
            if (universe.lens[static_cast<std::size_t>(i)] == 0) continue;  // x must be non-empty
            std::uint64_t key =
                (static_cast<std::uint64_t>(universe.lens[static_cast<std::size_t>(i)]) << 32) |
                universe.words[static_cast<std::size_t>(i)];
            t.target_index.emplace(key, i);
            t.max_target_len =
                std::max(t.max_target_len, universe.lens[static_cast<std::size_t>(i)]);
        }
    }

    ScanCells cells;
    cells.init(t);
    if (!request.want_cd) cells.cd.clear();
    run_scan(t, cells, request.limits.max_program_len);

    BatchResult result;
    result.members = std::move(universe.members);
    int cap = request.limits.max_program_len;
    if (request.want_c) {
        result.c.assign(result.members.size(), ComplexityValue{{}, {}, cap});
        for (const auto& [key, idx] : t.target_index)
            result.c[static_cast<std::size_t>(idx)] =
                to_value(cells.c[static_cast<std::size_t>(idx)], cap);
    }
    if (request.want_cd) {
        result.cd.reserve(cells.cd.size());
        for (const auto& ch : cells.cd) result.cd.push_back(to_value(ch, cap));
    }
    for (const auto& lang_cells : cells.ic) {
        std::vector<ComplexityValue> row;
        row.reserve(lang_cells.size());
        for (const auto& ch : lang_cells) row.push_back(to_value(ch, cap));
        result.ic.push_back(std::move(row));
    }
    return result;
}

namespace {

int member_index(const std::vector<BitString>& members, const BitString& x) {
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i] == x) return static_cast<int>(i);
    return -1;
}

}  // namespace

ComplexityValue cd_t(const BitString& x, const SearchLimits& limits) {
    if (!limits.universe.contains(x)) throw std::invalid_argument("cd_t: x not in universe");
    BatchRequest req;
    req.limits = limits;
    req.want_c = false;
    req.want_cd = true;
    BatchResult r = batch_search(req);
    return r.cd[static_cast<std::size_t>(member_index(r.members, x))];
}

ComplexityValue ic_t(const BitString& x, const LanguageOracle& language,
                     const SearchLimits& limits) {
    if (!limits.universe.contains(x)) throw std::invalid_argument("ic_t: x not in universe");
    BatchRequest req;
    req.limits = limits;
    req.want_c = false;
    req.want_cd = false;
    req.languages = {language};
    BatchResult r = batch_search(req);
    return r.ic[0][static_cast<std::size_t>(member_index(r.members, x))];
}

InstanceHardness classify_instance(const ComplexityValue& cd_value, const ComplexityValue& ic_value,
                                   int threshold) {
    if (cd_value.censored() || ic_value.censored()) return InstanceHardness::Indeterminate;
    return (*cd_value.value - *ic_value.value <= threshold) ? InstanceHardness::Hard
                                                            : InstanceHardness::Easy;
}

UtilitySet utility_set(const BitString& program, const LanguageOracle& language,
                       const SearchLimits& limits) {
    UtilitySet s;
    for (const auto& y : universe_members(limits.universe)) {
        RunOutcome out = run_acceptor(program, y, limits.step_budget);
        Verdict v = Verdict::Unknown;
        if (out.kind == RunOutcome::Kind::HaltedVerdict) v = out.verdict;
        if (v == Verdict::Unknown) continue;
        bool chi = language.chi(y);
        if ((v == Verdict::Accept) != chi)
            throw std::invalid_argument("utility_set: program is not " + language.name +
                                        "-consistent on the universe");
        s.members.push_back(y);
    }
    return s;
}

bool is_generator_witness(const BitString& program, const BitString& x, ExecutionBudget budget) {
    RunOutcome out = run_generator(program, budget);
    return out.kind == RunOutcome::Kind::HaltedOutput && out.output == x;
}

bool is_distinguishing_witness(const BitString& program, const BitString& x,
                               const std::vector<BitString>& universe, ExecutionBudget budget) {
    for (const auto& y : universe) {
        RunOutcome out = run_acceptor(program, y, budget);
        if (out.kind != RunOutcome::Kind::HaltedVerdict) return false;
        if (y == x ? out.verdict != Verdict::Accept : out.verdict != Verdict::Reject) return false;
    }
    return true;
}

bool is_consistent_decider(const BitString& program, const BitString& x,
                           const LanguageOracle& language, const std::vector<BitString>& universe,
                           ExecutionBudget budget) {
    bool decides_x = false;
    for (const auto& y : universe) {
        RunOutcome out = run_acceptor(program, y, budget);
        Verdict v = out.kind == RunOutcome::Kind::HaltedVerdict ? out.verdict : Verdict::Unknown;
        if (v == Verdict::Unknown) {
            if (y == x) return false;  // must decide x
            continue;
        }
        if ((v == Verdict::Accept) != language.chi(y)) return false;  // inconsistent
        if (y == x) decides_x = true;
    }
    return decides_x;
}

}  // namespace queasylab
