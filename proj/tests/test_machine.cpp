#include "doctest.h"

#include <string>
#include <vector>

#include "queasylab/machine.hpp"
#include "queasylab/rng.hpp"

using namespace queasylab;

namespace {

// 4-bit parity acceptor: accepts inputs with an odd number of ones.
const char* kParity4 = R"(
# r0: current bit, r1: parity
READ R0
JZ R0 5
JZ R1 3
DEC R1
JMP 2
INC R1
READ R0
JZ R0 5
JZ R1 3
DEC R1
JMP 2
INC R1
READ R0
JZ R0 5
JZ R1 3
DEC R1
JMP 2
INC R1
READ R0
JZ R0 5
JZ R1 3
DEC R1
JMP 2
INC R1
JZ R1 2
ACCEPT
REJECT
)";

BitString program_of(const std::string& text) { return assemble(text); }

}  // namespace

TEST_CASE("decode: empty program is an empty instruction list") {
    auto code = decode(BitString{});
    REQUIRE(code.has_value());
    CHECK(code->empty());
}

TEST_CASE("decode: three ones is a truncated opcode") {
    CHECK_FALSE(decode(BitString::from_string("111")).has_value());
}

TEST_CASE("decode: undefined opcodes and truncated operands are malformed") {
    // opcode 15
    CHECK_FALSE(decode(BitString::from_word(0b1111, 4)).has_value());
    // READ with one of its two register bits missing
    std::vector<Instruction> read_r0 = {{Op::Read, 0, 0, 0}};
    BitString bits = encode(read_r0);
    BitString truncated;
    for (std::size_t i = 0; i + 1 < bits.size(); ++i) truncated.push_back(bits[i]);
    CHECK_FALSE(decode(truncated).has_value());
}

TEST_CASE("decode round-trips the emit-eight-zeros program") {
    std::string text = "EMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nHALT\n";
    BitString p = program_of(text);
    CHECK(p.size() == 36);
    auto code = decode(p);
    REQUIRE(code.has_value());
    CHECK(code->size() == 9);
    CHECK(encode(*code) == p);
    CHECK(disassemble(p) == "EMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nHALT\n");
}

TEST_CASE("run_generator: empty program halts immediately with empty output") {
    RunOutcome out = run_generator(BitString{}, {10});
    CHECK(out.kind == RunOutcome::Kind::HaltedOutput);
    CHECK(out.output.empty());
    CHECK(out.steps_used == 0);
}

TEST_CASE("run_generator: the zeros emitter writes 00000000") {
    BitString p = program_of("EMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nEMIT0\nHALT\n");
    RunOutcome out = run_generator(p, {100});
    CHECK(out.kind == RunOutcome::Kind::HaltedOutput);
    CHECK(out.output.to_string() == "00000000");
    CHECK(out.steps_used == 9);
}

TEST_CASE("run_generator: a self-loop exhausts its budget") {
    BitString p = program_of("JMP 0\n");
    RunOutcome out = run_generator(p, {50});
    CHECK(out.kind == RunOutcome::Kind::OutOfTime);
    CHECK(out.steps_used == 50);
}

TEST_CASE("run_acceptor: verdict instructions") {
    CHECK(run_acceptor(program_of("ACCEPT\n"), BitString::from_string("0110"), {10}).verdict ==
          Verdict::Accept);
    CHECK(run_acceptor(program_of("UNKNOWN\n"), BitString::from_string("0110"), {10}).verdict ==
          Verdict::Unknown);
    CHECK(run_acceptor(program_of("REJECT\n"), BitString{}, {10}).verdict == Verdict::Reject);
}

TEST_CASE("run_acceptor: halting without a verdict answers unknown") {
    RunOutcome out = run_acceptor(program_of("EMIT1\nHALT\n"), BitString::from_string("1"), {10});
    CHECK(out.kind == RunOutcome::Kind::HaltedVerdict);
    CHECK(out.verdict == Verdict::Unknown);
}

TEST_CASE("run_acceptor: hand-assembled parity checker accepts 1011") {
    BitString p = program_of(kParity4);
    RunOutcome out = run_acceptor(p, BitString::from_string("1011"), {10000});
    CHECK(out.kind == RunOutcome::Kind::HaltedVerdict);
    CHECK(out.verdict == Verdict::Accept);

    // Full truth table against popcount parity.
    for (unsigned v = 0; v < 16; ++v) {
        BitString input = BitString::from_value(v, 4);
        bool odd = __builtin_popcount(v) % 2 == 1;
        RunOutcome r = run_acceptor(p, input, {10000});
        CHECK(r.kind == RunOutcome::Kind::HaltedVerdict);
        CHECK((r.verdict == Verdict::Accept) == odd);
    }
}

TEST_CASE("reads past the end give zeros and set the EOF flag") {
    BitString p = program_of("READ R0\nREAD R1\nJZ R1 2\nACCEPT\nREJECT\n");
    RunOutcome out = run_acceptor(p, BitString::from_string("1"), {100});
    CHECK(out.verdict == Verdict::Reject);  // the second read returned 0
    CHECK(out.input_eof);
}

TEST_CASE("jump outside the program halts it") {
    // JMP -5 from index 0 lands at -5: halt with unknown verdict.
    RunOutcome out = run_acceptor(program_of("JMP -5\n"), BitString{}, {10});
    CHECK(out.kind == RunOutcome::Kind::HaltedVerdict);
    CHECK(out.verdict == Verdict::Unknown);
    CHECK(out.steps_used == 1);
}

TEST_CASE("enumerate_programs order and counts") {
    std::vector<std::string> seen;
    enumerate_programs(1, [&](const BitString& p) { seen.push_back(p.to_string()); });
    CHECK(seen == std::vector<std::string>{"", "0", "1"});

    std::size_t count3 = 0;
    BitString last;
    bool ordered = true;
    bool first = true;
    enumerate_programs(3, [&](const BitString& p) {
        ++count3;
        if (!first && !last.length_lex_less(p)) ordered = false;
        last = p;
        first = false;
    });
    CHECK(count3 == 15);
    CHECK(program_count(3) == 15);
    CHECK(ordered);  // strict total order, no repeats

    std::size_t count0 = 0;
    enumerate_programs(0, [&](const BitString&) { ++count0; });
    CHECK(count0 == 1);
}

TEST_CASE("determinism: identical runs give identical outcomes") {
    CounterRng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t len = rng.next_below(24);
        BitString p;
        for (std::size_t i = 0; i < len; ++i) p.push_back(rng.next_bool(0.5));
        BitString input = BitString::from_value(rng.next_below(16), 4);
        RunOutcome a = run_acceptor(p, input, {64});
        RunOutcome b = run_acceptor(p, input, {64});
        CHECK(a.kind == b.kind);
        CHECK(a.verdict == b.verdict);
        CHECK(a.steps_used == b.steps_used);
    }
}

TEST_CASE("budget monotonicity: once halted, bigger budgets change nothing") {
    CounterRng rng(13);
    int halted = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t len = rng.next_below(24);
        BitString p;
        for (std::size_t i = 0; i < len; ++i) p.push_back(rng.next_bool(0.5));
        RunOutcome small = run_generator(p, {32});
        if (small.kind != RunOutcome::Kind::HaltedOutput) continue;
        ++halted;
        for (std::uint64_t budget : {33ULL, 64ULL, 1000ULL}) {
            RunOutcome big = run_generator(p, {budget});
            CHECK(big.kind == RunOutcome::Kind::HaltedOutput);
            CHECK(big.output == small.output);
            CHECK(big.steps_used == small.steps_used);
        }
    }
    CHECK(halted > 50);  // the sample actually exercised the property
}

TEST_CASE("assembler round trip is bit-exact") {
    const char* text = "READ R2\nJZ R2 -3\nCPY R1 R3\nINC R0\nDEC R3\nJMP 7\nEMIT1\nACCEPT\n";
    BitString p = assemble(text);
    CHECK(disassemble(p) == text);
    CHECK(assemble(disassemble(p)) == p);
}

TEST_CASE("assembler rejects bad input with line numbers") {
    CHECK_THROWS_WITH_AS(assemble("NOPE\n"), doctest::Contains("line 1"), std::invalid_argument);
    CHECK_THROWS_AS(assemble("JZ R4 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(assemble("JMP 32\n"), std::invalid_argument);
    CHECK_THROWS_AS(assemble("READ\n"), std::invalid_argument);
}
