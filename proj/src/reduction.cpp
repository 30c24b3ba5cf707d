#include "queasylab/reduction.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace queasylab {

namespace {

/// Clause builder with Tseitin gate helpers. Variable 0 stands for the
/// constant false wire so adder columns can skip absent inputs.
class CnfBuilder {
  public:
    int new_var() { return ++var_count_; }

    void add_clause(std::vector<int> lits) {
        if (lits.empty()) throw std::logic_error("reduction: empty clause");
        clauses_.push_back(std::move(lits));
    }

    int and_gate(int a, int b) {
        if (a == 0 || b == 0) return 0;
        int o = new_var();
        add_clause({-o, a});
        add_clause({-o, b});
        add_clause({o, -a, -b});
        return o;
    }

    int xor_gate(int a, int b) {
        if (a == 0) return b;
        if (b == 0) return a;
        int o = new_var();
        add_clause({-o, a, b});
        add_clause({-o, -a, -b});
        add_clause({o, -a, b});
        add_clause({o, a, -b});
        return o;
    }

    int majority_gate(int a, int b, int c) {
        // With any constant-false input this degenerates to AND.
        if (a == 0) return and_gate(b, c);
        if (b == 0) return and_gate(a, c);
        if (c == 0) return and_gate(a, b);
        int o = new_var();
        add_clause({-o, a, b});
        add_clause({-o, a, c});
        add_clause({-o, b, c});
        add_clause({o, -a, -b});
        add_clause({o, -a, -c});
        add_clause({o, -b, -c});
        return o;
    }

    /// Pins a wire to a constant. Pinning the constant-false wire to one is
    /// an unsatisfiable demand, expressed as a conflicting fresh variable.
    void require_bit(int wire, bool value) {
        if (wire == 0) {
            if (value) {
                int t = new_var();
                add_clause({t});
                add_clause({-t});
            }
            return;
        }
        add_clause({value ? wire : -wire});
    }

    int var_count() const { return var_count_; }
    std::vector<std::vector<int>>& clauses() { return clauses_; }

  private:
    int var_count_ = 0;
    std::vector<std::vector<int>> clauses_;
};

}  // namespace

ReductionArtifact reduce_to_sat(const FacInstance& z) {
    if (z.x < 4) throw std::invalid_argument("reduce_to_sat: x must be >= 4");
    if (z.x > kFacMaxX) throw std::invalid_argument("reduce_to_sat: x exceeds 2^40");
    const int n = std::bit_width(z.x);
    const int width = n - 1;  // p, q >= 2 and p*q = x force p, q < 2^(n-1)

    CnfBuilder b;
    std::vector<int> p(static_cast<std::size_t>(width)), q(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) p[static_cast<std::size_t>(i)] = b.new_var();
    for (int i = 0; i < width; ++i) q[static_cast<std::size_t>(i)] = b.new_var();

    // Ripple-carry multiplier: accumulate p * q_j, shifted by j, one row at a
    // time. acc[k] is the wire for product bit k (0 = constant zero).
    std::vector<int> acc(static_cast<std::size_t>(2 * width), 0);
    for (int j = 0; j < width; ++j) {
        int carry = 0;
        for (int i = 0; i < width; ++i) {
            int pp = b.and_gate(p[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)]);
            int k = i + j;
            int sum = b.xor_gate(b.xor_gate(acc[static_cast<std::size_t>(k)], pp), carry);
            carry = b.majority_gate(acc[static_cast<std::size_t>(k)], pp, carry);
            acc[static_cast<std::size_t>(k)] = sum;
        }
        for (int k = j + width; carry != 0 && k < 2 * width; ++k) {
            int sum = b.xor_gate(acc[static_cast<std::size_t>(k)], carry);
            carry = b.and_gate(acc[static_cast<std::size_t>(k)], carry);
            acc[static_cast<std::size_t>(k)] = sum;
        }
    }

    // Product equals x, including zero bits above x's width.
    for (int k = 0; k < 2 * width; ++k)
        b.require_bit(acc[static_cast<std::size_t>(k)], k < n && ((z.x >> k) & 1) != 0);

    // Nontriviality: p >= 2 and q >= 2.
    std::vector<int> p_high, q_high;
    for (int i = 1; i < width; ++i) {
        p_high.push_back(p[static_cast<std::size_t>(i)]);
        q_high.push_back(q[static_cast<std::size_t>(i)]);
    }
    b.add_clause(p_high);
    b.add_clause(q_high);

    // Prefix constraints, anchored at p's leading one: sel_i says p's most
    // significant set bit is at index i, and the prefix reads downward from
    // there. The empty prefix needs no selector at all.
    const std::size_t prefix_len = z.a.size();
    if (prefix_len > 0) {
        std::vector<int> sel(static_cast<std::size_t>(width), 0);
        for (int i = 1; i < width; ++i) sel[static_cast<std::size_t>(i)] = b.new_var();
        std::vector<int> at_least_one;
        for (int i = 1; i < width; ++i) {
            int s = sel[static_cast<std::size_t>(i)];
            at_least_one.push_back(s);
            b.add_clause({-s, p[static_cast<std::size_t>(i)]});
            for (int jj = i + 1; jj < width; ++jj)
                b.add_clause({-s, -p[static_cast<std::size_t>(jj)]});
            for (int jj = 1; jj < i; ++jj)
                b.add_clause({-s, -sel[static_cast<std::size_t>(jj)]});
            if (static_cast<std::size_t>(i) + 1 < prefix_len) {
                b.add_clause({-s});  // p would be shorter than the prefix
                continue;
            }
            for (std::size_t t = 0; t < prefix_len; ++t) {
                int bit_var = p[static_cast<std::size_t>(i) - t];
                b.add_clause({-s, z.a[t] ? bit_var : -bit_var});
            }
        }
        b.add_clause(at_least_one);
    }

    const int semantic_vars = b.var_count();

    // Tag block: one unit clause per bit of <x,a>, on fresh variables in
    // ascending order, appended after every semantic clause.
    BitString tag_bits = encode_pair(z.x, z.a);

    ReductionArtifact art;
    art.source = z;
    art.p_width = width;
    art.q_width = width;
    art.semantic_variable_count = semantic_vars;

    // Keep every semantic unit clause ahead of the non-units so the final
    // semantic clause can never be mistaken for part of the tag run.
    std::vector<std::vector<int>>& built = b.clauses();
    std::stable_partition(built.begin(), built.end(),
                          [](const std::vector<int>& c) { return c.size() == 1; });

    CnfFormula& f = art.formula;
    f.clauses = std::move(built);
    f.variable_count = semantic_vars + static_cast<int>(tag_bits.size());
    f.tag_variable_count = static_cast<int>(tag_bits.size());
    for (std::size_t i = 0; i < tag_bits.size(); ++i) {
        int v = semantic_vars + static_cast<int>(i) + 1;
        f.clauses.push_back({tag_bits[i] ? v : -v});
    }
    validate_formula(f);
    return art;
}

std::pair<std::uint64_t, std::uint64_t> ReductionArtifact::extract_factors(
    const std::vector<bool>& model) const {
    std::uint64_t p = 0, q = 0;
    for (int i = p_width - 1; i >= 0; --i) p = (p << 1) | (model[static_cast<std::size_t>(i)] ? 1 : 0);
    for (int i = q_width - 1; i >= 0; --i)
        q = (q << 1) | (model[static_cast<std::size_t>(p_width + i)] ? 1 : 0);
    return {p, q};
}

FacInstance invert_reduction(const CnfFormula& f) {
    // The tag run: trailing unit clauses over consecutively descending
    // variables ending at variable_count.
    int expect = f.variable_count;
    int run = 0;
    for (auto it = f.clauses.rbegin(); it != f.clauses.rend(); ++it) {
        const auto& clause = *it;
        if (clause.size() != 1) break;
        int v = clause[0] > 0 ? clause[0] : -clause[0];
        if (v != expect) break;
        --expect;
        ++run;
    }
    if (run == 0) throw std::invalid_argument("invert_reduction: no tag block");
    BitString bits;
    std::size_t first = f.clauses.size() - static_cast<std::size_t>(run);
    for (int i = 0; i < run; ++i) bits.push_back(f.clauses[first + static_cast<std::size_t>(i)][0] > 0);
    auto z = try_decode_pair(bits);
    if (!z) throw std::invalid_argument("invert_reduction: corrupt tag block");
    return *z;
}

bool factor_prefix_oracle(const FacInstance& z) {
    if (z.x < 2) throw std::invalid_argument("factor_prefix_oracle: x must be >= 2");
    for (std::uint64_t p = 2; p <= z.x / 2; ++p) {
        if (z.x % p != 0) continue;
        BitString bits = minimal_binary(p);
        if (z.a.size() > bits.size()) continue;
        bool ok = true;
        for (std::size_t i = 0; i < z.a.size() && ok; ++i) ok = z.a[i] == bits[i];
        if (ok) return true;
    }
    return false;
}

ReductionReport verify_reduction(const FacInstance& z) {
    if (z.x > (std::uint64_t{1} << 20))
        throw std::invalid_argument("verify_reduction: x above the brute-force range");
    ReductionArtifact art = reduce_to_sat(z);
    ReductionReport report;
    report.variables = art.formula.variable_count;
    report.clauses = static_cast<int>(art.formula.clauses.size());
    auto model = sat_solve(art.formula);
    report.formula_satisfiable = model.has_value();
    if (model) {
        auto [p, q] = art.extract_factors(*model);
        if (p * q != z.x || p < 2 || q < 2)
            throw std::logic_error("verify_reduction: model is not a factorization");
    }
    report.oracle_satisfiable = factor_prefix_oracle(z);
    report.match = report.formula_satisfiable == report.oracle_satisfiable;
    FacInstance back = invert_reduction(art.formula);
    report.roundtrip_ok = back.x == z.x && back.a == z.a;
    return report;
}

}  // namespace queasylab
