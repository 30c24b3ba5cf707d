#include "doctest.h"

#include <set>
#include <string>

#include "queasylab/problems.hpp"
#include "queasylab/rng.hpp"

using namespace queasylab;

namespace {

CnfFormula random_formula(CounterRng& rng, int max_vars) {
    CnfFormula f;
    f.variable_count = 3 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_vars - 2)));
    int clauses = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(4 * f.variable_count)));
    for (int c = 0; c < clauses; ++c) {
        std::vector<int> clause;
        int width = 1 + static_cast<int>(rng.next_below(3));
        while (static_cast<int>(clause.size()) < width) {
            int v = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(f.variable_count)));
            bool dup = false;
            for (int lit : clause)
                if (lit == v || lit == -v) dup = true;
            if (!dup) clause.push_back(rng.next_bool(0.5) ? v : -v);
        }
        f.clauses.push_back(clause);
    }
    return f;
}

/// Independent largest-prime-factor route: scan downward for the largest
/// divisor that is prime, with primality by trial division.
std::uint64_t lpf_reference(std::uint64_t x) {
    for (std::uint64_t p = x; p >= 2; --p)
        if (x % p == 0 && is_prime(p)) return p;
    return 1;
}

}  // namespace

TEST_CASE("parity language") {
    auto L = parity_language();
    CHECK(L.chi(BitString::from_string("1011")));
    CHECK_FALSE(L.chi(BitString::from_string("11")));
    CHECK_FALSE(L.chi(BitString{}));
}

TEST_CASE("fac_decide examples") {
    CHECK(fac_decide({15, BitString::from_string("10")}));  // 5 = 101
    CHECK(fac_decide({12, BitString::from_string("11")}));  // 3 = 11
    CHECK(fac_decide({15, BitString{}}));                   // empty prefix matches everything
    CHECK_FALSE(fac_decide({15, BitString::from_string("11")}));
    CHECK_FALSE(fac_decide({15, BitString::from_string("0")}));  // minimal form starts with 1
    CHECK_THROWS_AS(fac_decide({1, BitString{}}), std::invalid_argument);
    CHECK_THROWS_AS(fac_decide({(std::uint64_t{1} << 40) + 2, BitString{}}), std::invalid_argument);
}

TEST_CASE("fac_decide agrees with an independent factorization") {
    for (std::uint64_t x = 2; x < 10000; x += (x < 300 ? 1 : 7)) {
        std::uint64_t p = lpf_reference(x);
        CHECK(largest_prime_factor(x) == p);
        BitString bits = minimal_binary(p);
        for (int len = 0; len <= 4; ++len) {
            std::uint64_t count = std::uint64_t{1} << len;
            for (std::uint64_t v = 0; v < count; ++v) {
                BitString a = BitString::from_value(v, static_cast<std::size_t>(len));
                bool expect = a.size() <= bits.size();
                for (std::size_t i = 0; i < a.size() && expect; ++i) expect = a[i] == bits[i];
                CHECK(fac_decide({x, a}) == expect);
            }
        }
    }
}

TEST_CASE("pair codec round trips") {
    auto check_roundtrip = [](std::uint64_t x, const std::string& a) {
        BitString bits = encode_pair(x, BitString::from_string(a));
        FacInstance z = decode_pair(bits);
        CHECK(z.x == x);
        CHECK(z.a.to_string() == a);
    };
    check_roundtrip(15, "10");
    check_roundtrip(2, "");
    check_roundtrip(999983, "10110");
}

TEST_CASE("pair codec is injective for x < 64, |a| <= 3") {
    std::set<std::string> seen;
    int total = 0;
    for (std::uint64_t x = 2; x < 64; ++x) {
        for (int len = 0; len <= 3; ++len) {
            std::uint64_t count = std::uint64_t{1} << len;
            for (std::uint64_t v = 0; v < count; ++v) {
                BitString a = BitString::from_value(v, static_cast<std::size_t>(len));
                seen.insert(encode_pair(x, a).to_string());
                ++total;
            }
        }
    }
    CHECK(static_cast<int>(seen.size()) == total);
}

TEST_CASE("pair codec rejects malformed bits") {
    CHECK_FALSE(try_decode_pair(BitString{}).has_value());
    CHECK_FALSE(try_decode_pair(BitString::from_string("1111")).has_value());
    CHECK_FALSE(try_decode_pair(BitString::from_string("0")).has_value());
    // canonical <2, ""> is "110" + "10" + "10"; damaging x's leading bit breaks it
    BitString good = encode_pair(2, BitString{});
    CHECK(good.to_string() == "1101010");
    BitString bad = good;
    bad.set(5, false);
    CHECK_FALSE(try_decode_pair(bad).has_value());
    CHECK_THROWS_AS(decode_pair(bad), std::invalid_argument);
    // trailing bits after x belong to a, so they are always accepted
    BitString longer = good;
    longer.push_back(true);
    auto z = try_decode_pair(longer);
    REQUIRE(z.has_value());
    CHECK(z->a.to_string() == "1");
}

TEST_CASE("fac language is total and rejects garbage encodings") {
    auto L = fac_language();
    CHECK(L.chi(encode_pair(15, BitString::from_string("10"))));
    CHECK_FALSE(L.chi(encode_pair(15, BitString::from_string("11"))));
    CHECK_FALSE(L.chi(BitString::from_string("0000")));
}

TEST_CASE("dpll: degenerate formulas") {
    CnfFormula empty;
    empty.variable_count = 0;
    CHECK(sat_decide_budgeted(empty, 0) == SolverAnswer::Sat);

    CnfFormula contradiction;
    contradiction.variable_count = 1;
    contradiction.clauses = {{1}, {-1}};
    CHECK(sat_decide_budgeted(contradiction, 0) == SolverAnswer::Unsat);
    CHECK(sat_decide_budgeted(contradiction, 1000000) == SolverAnswer::Unsat);
}

TEST_CASE("dpll: 20-var 3-CNF at ratio 4.3: budget 1 bot, big budget matches brute force") {
    CounterRng rng(42);
    CnfFormula f;
    f.variable_count = 20;
    for (int c = 0; c < 86; ++c) {
        std::vector<int> clause;
        while (clause.size() < 3) {
            int v = 1 + static_cast<int>(rng.next_below(20));
            bool dup = false;
            for (int lit : clause)
                if (lit == v || lit == -v) dup = true;
            if (!dup) clause.push_back(rng.next_bool(0.5) ? v : -v);
        }
        f.clauses.push_back(clause);
    }
    CHECK(sat_decide_budgeted(f, 1) == SolverAnswer::Bot);
    SolverAnswer big = sat_decide_budgeted(f, 1000000);
    REQUIRE(big != SolverAnswer::Bot);
    CHECK((big == SolverAnswer::Sat) == sat_brute_force(f));
}

TEST_CASE("dpll consistency: answers never contradict brute force") {
    CounterRng rng(5);
    for (int i = 0; i < 120; ++i) {
        CnfFormula f = random_formula(rng, 12);
        bool truth = sat_brute_force(f);
        for (std::uint64_t budget : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{4},
                                     std::uint64_t{100}, std::uint64_t{1000000}}) {
            SolverAnswer a = sat_decide_budgeted(f, budget);
            if (a != SolverAnswer::Bot) CHECK((a == SolverAnswer::Sat) == truth);
        }
    }
}

TEST_CASE("dpll budget monotonicity") {
    CounterRng rng(9);
    for (int i = 0; i < 80; ++i) {
        CnfFormula f = random_formula(rng, 10);
        SolverAnswer last = SolverAnswer::Bot;
        for (std::uint64_t budget : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{2},
                                     std::uint64_t{8}, std::uint64_t{64}, std::uint64_t{100000}}) {
            SolverAnswer a = sat_decide_budgeted(f, budget);
            if (last != SolverAnswer::Bot) CHECK(a == last);
            last = a;
        }
        CHECK(last != SolverAnswer::Bot);
    }
}

TEST_CASE("dpll models satisfy the formula") {
    CounterRng rng(21);
    for (int i = 0; i < 60; ++i) {
        CnfFormula f = random_formula(rng, 10);
        auto model = sat_solve(f);
        CHECK(model.has_value() == sat_brute_force(f));
        if (!model) continue;
        for (const auto& clause : f.clauses) {
            bool sat = false;
            for (int lit : clause) {
                int v = (lit > 0 ? lit : -lit) - 1;
                if ((*model)[static_cast<std::size_t>(v)] == (lit > 0)) sat = true;
            }
            CHECK(sat);
        }
    }
}

TEST_CASE("dimacs parsing") {
    CnfFormula f = parse_dimacs("p cnf 1 1\n1 0\n");
    CHECK(f.variable_count == 1);
    REQUIRE(f.clauses.size() == 1);
    CHECK(f.clauses[0] == std::vector<int>{1});

    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), DimacsError);
    CHECK_THROWS_AS(parse_dimacs("1 0\n"), DimacsError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n0\n"), DimacsError);      // empty clause
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1\n"), DimacsError);      // unterminated
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), DimacsError);    // count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1 x 0\n"), DimacsError);  // junk token

    try {
        parse_dimacs("p cnf 1 1\n2 0\n");
    } catch (const DimacsError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("dimacs: comments are a side channel, never semantic") {
    CnfFormula f = parse_dimacs("c hello\np cnf 2 1\nc mid\n1 -2 0\n");
    REQUIRE(f.comments.size() == 2);
    CHECK(f.comments[0] == "hello");
    CHECK(f.clauses.size() == 1);
}

TEST_CASE("dimacs round trips on a 50-clause formula") {
    CounterRng rng(77);
    CnfFormula f;
    f.variable_count = 12;
    f.comments = {"generated fixture"};
    while (f.clauses.size() < 50) {
        std::vector<int> clause;
        int width = 1 + static_cast<int>(rng.next_below(4));
        while (static_cast<int>(clause.size()) < width) {
            int v = 1 + static_cast<int>(rng.next_below(12));
            bool dup = false;
            for (int lit : clause)
                if (lit == v || lit == -v) dup = true;
            if (!dup) clause.push_back(rng.next_bool(0.5) ? v : -v);
        }
        f.clauses.push_back(clause);
    }
    std::string text = emit_dimacs(f);
    CnfFormula back = parse_dimacs(text);
    CHECK(back.variable_count == f.variable_count);
    CHECK(back.clauses == f.clauses);
    CHECK(back.comments == f.comments);
    // emit . parse is byte-stable once the text is in emitted form
    CHECK(emit_dimacs(back) == text);
}
