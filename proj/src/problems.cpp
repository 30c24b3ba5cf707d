#include "queasylab/problems.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace queasylab {

// --- languages ----------------------------------------------------------

LanguageOracle parity_language() {
    return {"parity", [](const BitString& x) {
                std::size_t ones = 0;
                for (std::size_t i = 0; i < x.size(); ++i) ones += x[i] ? 1 : 0;
                return (ones % 2) == 1;
            }};
}

LanguageOracle odd_zero_parity_language() {
    auto parity = parity_language();
    return {"coparity", [chi = parity.chi](const BitString& x) { return !chi(x); }};
}

LanguageOracle full_language() {
    return {"full", [](const BitString&) { return true; }};
}

LanguageOracle empty_language() {
    return {"empty", [](const BitString&) { return false; }};
}

LanguageOracle fac_language() {
    return {"fac", [](const BitString& bits) {
                auto z = try_decode_pair(bits);
                if (!z || z->x < 2 || z->x > kFacMaxX) return false;
                return fac_decide(*z);
            }};
}

// --- factoring ------------------------------------------------------------

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t largest_prime_factor(std::uint64_t x) {
    std::uint64_t best = 1;
    while (x % 2 == 0) {
        best = 2;
        x /= 2;
    }
    for (std::uint64_t d = 3; d * d <= x; d += 2) {
        while (x % d == 0) {
            best = d;
            x /= d;
        }
    }
    if (x > 1) best = x;  // the remaining cofactor is prime
    return best;
}

BitString minimal_binary(std::uint64_t v) {
    int n = std::bit_width(v);
    return BitString::from_value(v, static_cast<std::size_t>(n));
}

bool fac_decide(const FacInstance& z) {
    if (z.x < 2 || z.x > kFacMaxX)
        throw std::invalid_argument("fac_decide: x outside [2, 2^40]");
    BitString p = minimal_binary(largest_prime_factor(z.x));
    if (z.a.size() > p.size()) return false;
    for (std::size_t i = 0; i < z.a.size(); ++i)
        if (z.a[i] != p[i]) return false;
    return true;
}

BitString encode_pair(std::uint64_t x, const BitString& a) {
    if (x < 2) throw std::invalid_argument("encode_pair: x must be >= 2");
    int len = std::bit_width(x);
    int k = std::bit_width(static_cast<unsigned>(len));
    BitString out;
    for (int i = 0; i < k; ++i) out.push_back(true);
    out.push_back(false);
    out.append(BitString::from_value(static_cast<std::uint64_t>(len), static_cast<std::size_t>(k)));
    out.append(BitString::from_value(x, static_cast<std::size_t>(len)));
    out.append(a);
    return out;
}

std::optional<FacInstance> try_decode_pair(const BitString& bits) {
    std::size_t pos = 0;
    int k = 0;
    while (pos < bits.size() && bits[pos]) {
        ++k;
        ++pos;
    }
    if (pos >= bits.size() || k < 1 || k > 6) return std::nullopt;
    ++pos;  // the 0 terminating the unary header
    if (pos + static_cast<std::size_t>(k) > bits.size()) return std::nullopt;
    std::uint64_t len = 0;
    for (int i = 0; i < k; ++i) len = (len << 1) | (bits[pos++] ? 1 : 0);
    if (static_cast<int>(std::bit_width(len)) != k) return std::nullopt;  // non-canonical header
    if (len < 2 || len > 64) return std::nullopt;
    if (pos + len > bits.size()) return std::nullopt;
    std::uint64_t x = 0;
    for (std::uint64_t i = 0; i < len; ++i) x = (x << 1) | (bits[pos++] ? 1 : 0);
    if (static_cast<std::uint64_t>(std::bit_width(x)) != len) return std::nullopt;  // leading bit must be 1
    FacInstance z;
    z.x = x;
    for (; pos < bits.size(); ++pos) z.a.push_back(bits[pos]);
    return z;
}

FacInstance decode_pair(const BitString& bits) {
    auto z = try_decode_pair(bits);
    if (!z) throw std::invalid_argument("decode_pair: malformed encoding");
    return *z;
}

// --- CNF solving ------------------------------------------------------------

void validate_formula(const CnfFormula& f) {
    if (f.variable_count < 0) throw std::invalid_argument("cnf: negative variable count");
    for (const auto& clause : f.clauses) {
        if (clause.empty()) throw std::invalid_argument("cnf: empty clause");
        for (int lit : clause) {
            int v = lit > 0 ? lit : -lit;
            if (lit == 0 || v > f.variable_count)
                throw std::invalid_argument("cnf: literal out of range");
        }
    }
}

namespace {

// Counter-based DPLL state: per clause we track how many literals are
// satisfied and how many are unassigned, updated through occurrence lists.
class DpllSolver {
  public:
    explicit DpllSolver(const CnfFormula& f) : formula_(f) {
        validate_formula(f);
        int nv = f.variable_count;
        value_.assign(static_cast<std::size_t>(nv), -1);
        pos_occ_.resize(static_cast<std::size_t>(nv));
        neg_occ_.resize(static_cast<std::size_t>(nv));
        sat_count_.assign(f.clauses.size(), 0);
        unassigned_count_.resize(f.clauses.size());
        for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
            unassigned_count_[ci] = static_cast<int>(f.clauses[ci].size());
            for (int lit : f.clauses[ci]) {
                int v = (lit > 0 ? lit : -lit) - 1;
                (lit > 0 ? pos_occ_ : neg_occ_)[static_cast<std::size_t>(v)].push_back(
                    static_cast<int>(ci));
            }
        }
        unsat_clauses_ = static_cast<int>(f.clauses.size());
    }

    SolverAnswer solve(std::uint64_t budget, std::vector<bool>* model) {
        budget_ = budget;
        SolverAnswer a = search();
        if (a == SolverAnswer::Sat && model != nullptr) {
            model->assign(value_.size(), false);
            for (std::size_t i = 0; i < value_.size(); ++i) (*model)[i] = value_[i] == 1;
        }
        return a;
    }

  private:
    SolverAnswer search() {
        std::size_t mark = trail_.size();
        if (!propagate()) {
            undo_to(mark);
            return SolverAnswer::Unsat;
        }
        if (unsat_clauses_ == 0) return SolverAnswer::Sat;  // trail kept for the model
        if (budget_ == 0) {
            undo_to(mark);
            return SolverAnswer::Bot;
        }
        --budget_;
        int var = pick_branch_variable();
        for (int val : {0, 1}) {
            std::size_t branch_mark = trail_.size();
            if (set_value(var, val)) {
                SolverAnswer a = search();
                if (a != SolverAnswer::Unsat) return a;  // Sat or Bot propagates up
            }
            undo_to(branch_mark);
        }
        undo_to(mark);
        return SolverAnswer::Unsat;
    }

    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t ci = 0; ci < formula_.clauses.size(); ++ci) {
                if (sat_count_[ci] > 0) continue;
                if (unassigned_count_[ci] == 0) return false;  // conflict
                if (unassigned_count_[ci] == 1) {
                    int unit = 0;
                    for (int lit : formula_.clauses[ci]) {
                        int v = (lit > 0 ? lit : -lit) - 1;
                        if (value_[static_cast<std::size_t>(v)] == -1) {
                            unit = lit;
                            break;
                        }
                    }
                    if (!set_value((unit > 0 ? unit : -unit) - 1, unit > 0 ? 1 : 0)) return false;
                    changed = true;
                }
            }
        }
        return true;
    }

    bool set_value(int var, int val) {
        value_[static_cast<std::size_t>(var)] = static_cast<std::int8_t>(val);
        trail_.push_back(var);
        const auto& sat_list = (val == 1 ? pos_occ_ : neg_occ_)[static_cast<std::size_t>(var)];
        const auto& other_list = (val == 1 ? neg_occ_ : pos_occ_)[static_cast<std::size_t>(var)];
        for (int ci : sat_list) {
            if (sat_count_[static_cast<std::size_t>(ci)] == 0) --unsat_clauses_;
            ++sat_count_[static_cast<std::size_t>(ci)];
            --unassigned_count_[static_cast<std::size_t>(ci)];
        }
        bool ok = true;
        for (int ci : other_list) {
            if (--unassigned_count_[static_cast<std::size_t>(ci)] == 0 &&
                sat_count_[static_cast<std::size_t>(ci)] == 0)
                ok = false;
        }
        return ok;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            int var = trail_.back();
            trail_.pop_back();
            int val = value_[static_cast<std::size_t>(var)];
            value_[static_cast<std::size_t>(var)] = -1;
            const auto& sat_list = (val == 1 ? pos_occ_ : neg_occ_)[static_cast<std::size_t>(var)];
            const auto& other_list =
                (val == 1 ? neg_occ_ : pos_occ_)[static_cast<std::size_t>(var)];
            for (int ci : sat_list) {
                --sat_count_[static_cast<std::size_t>(ci)];
                if (sat_count_[static_cast<std::size_t>(ci)] == 0) ++unsat_clauses_;
                ++unassigned_count_[static_cast<std::size_t>(ci)];
            }
            for (int ci : other_list) ++unassigned_count_[static_cast<std::size_t>(ci)];
        }
    }

    int pick_branch_variable() const {
        // Lowest-index unassigned variable in a not-yet-satisfied clause;
        // deterministic, which the budget monotonicity contract relies on.
        int best = -1;
        for (std::size_t ci = 0; ci < formula_.clauses.size(); ++ci) {
            if (sat_count_[ci] > 0) continue;
            for (int lit : formula_.clauses[ci]) {
                int v = (lit > 0 ? lit : -lit) - 1;
                if (value_[static_cast<std::size_t>(v)] == -1 && (best == -1 || v < best))
                    best = v;
            }
        }
        return best;
    }

    const CnfFormula& formula_;
    std::vector<std::int8_t> value_;
    std::vector<std::vector<int>> pos_occ_, neg_occ_;
    std::vector<int> sat_count_, unassigned_count_;
    std::vector<int> trail_;
    int unsat_clauses_ = 0;
    std::uint64_t budget_ = 0;
};

}  // namespace

SolverAnswer sat_decide_budgeted(const CnfFormula& f, std::uint64_t budget) {
    DpllSolver solver(f);
    return solver.solve(budget, nullptr);
}

std::optional<std::vector<bool>> sat_solve(const CnfFormula& f) {
    DpllSolver solver(f);
    std::vector<bool> model;
    if (solver.solve(UINT64_MAX, &model) == SolverAnswer::Sat) return model;
    return std::nullopt;
}

bool sat_brute_force(const CnfFormula& f) {
    validate_formula(f);
    if (f.variable_count > 24) throw std::invalid_argument("sat_brute_force: too many variables");
    std::vector<std::uint32_t> pos_mask(f.clauses.size(), 0), neg_mask(f.clauses.size(), 0);
    for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
        for (int lit : f.clauses[ci]) {
            int v = (lit > 0 ? lit : -lit) - 1;
            if (lit > 0)
                pos_mask[ci] |= std::uint32_t{1} << v;
            else
                neg_mask[ci] |= std::uint32_t{1} << v;
        }
    }
    std::uint64_t total = std::uint64_t{1} << f.variable_count;
    for (std::uint64_t a = 0; a < total; ++a) {
        bool ok = true;
        std::uint32_t assign = static_cast<std::uint32_t>(a);
        for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
            if ((assign & pos_mask[ci]) == 0 && ((~assign) & neg_mask[ci]) == 0) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

// --- DIMACS -----------------------------------------------------------------

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool have_header = false;
    int declared_clauses = 0;
    std::vector<int> current;
    int clause_start_line = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        if (raw[0] == 'c') {
            f.comments.push_back(raw.size() > 1 ? raw.substr(raw[1] == ' ' ? 2 : 1) : "");
            continue;
        }
        if (raw[0] == 'p') {
            if (have_header) throw DimacsError(line_no, "duplicate header");
            std::istringstream hs(raw);
            std::string p, fmt;
            if (!(hs >> p >> fmt >> f.variable_count >> declared_clauses) || fmt != "cnf")
                throw DimacsError(line_no, "expected 'p cnf <vars> <clauses>'");
            if (f.variable_count < 0 || declared_clauses < 0)
                throw DimacsError(line_no, "negative counts in header");
            have_header = true;
            continue;
        }
        if (!have_header) throw DimacsError(line_no, "clause before header");
        std::istringstream ls(raw);
        long lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (current.empty()) throw DimacsError(line_no, "empty clause");
                f.clauses.push_back(current);
                current.clear();
            } else {
                if (current.empty()) clause_start_line = line_no;
                long v = lit > 0 ? lit : -lit;
                if (v > f.variable_count)
                    throw DimacsError(line_no, "literal exceeds variable count");
                current.push_back(static_cast<int>(lit));
            }
        }
        std::string rest;
        ls.clear();
        if (ls >> rest) throw DimacsError(line_no, "unexpected token '" + rest + "'");
    }
    if (!have_header) throw DimacsError(line_no, "missing header");
    if (!current.empty()) throw DimacsError(clause_start_line, "unterminated clause");
    if (static_cast<int>(f.clauses.size()) != declared_clauses)
        throw DimacsError(line_no, "clause count does not match header");
    return f;
}

std::string emit_dimacs(const CnfFormula& f) {
    std::ostringstream out;
    for (const auto& c : f.comments) out << "c " << c << "\n";
    out << "p cnf " << f.variable_count << " " << f.clauses.size() << "\n";
    for (const auto& clause : f.clauses) {
        for (int lit : clause) out << lit << " ";
        out << "0\n";
    }
    return out.str();
}

}  // namespace queasylab
