#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "queasylab/bitstring.hpp"

namespace queasylab {

// ---------------------------------------------------------------------------
// The reference machine.
//
// A deterministic register machine with four 64-bit registers (wrapping
// arithmetic), a one-way read-only input tape of bits, and an append-only
// output tape of bits. Programs are plain bitstrings. Every executed
// instruction costs exactly one step.
//
// Binary instruction format: a 4-bit opcode followed by fixed-width operands.
// All fields are little-endian within the bit stream: the field's least
// significant bit comes first. Register fields are 2 bits, jump offsets are
// 6-bit two's complement, relative to the current instruction index.
// ---------------------------------------------------------------------------

enum class Op : std::uint8_t {
    Halt = 0,     // halt (verdict ⊥ in acceptor mode)
    Accept = 1,   // halt with verdict 1
    Reject = 2,   // halt with verdict 0
    Unknown = 3,  // halt with verdict ⊥
    Emit0 = 4,    // append 0 to the output tape
    Emit1 = 5,    // append 1 to the output tape
    Read = 6,     // r <- next input bit; past the end: r <- 0 and the EOF flag is set
    Inc = 7,      // r <- r + 1 (mod 2^64)
    Dec = 8,      // r <- r - 1 (mod 2^64)
    Jz = 9,       // if r == 0 then pc <- pc + delta else pc <- pc + 1
    Jmp = 10,     // pc <- pc + delta
    Cpy = 11,     // r <- s
};

struct Instruction {
    Op op;
    std::uint8_t r = 0;
    std::uint8_t s = 0;
    std::int8_t delta = 0;
};

/// Encoded width in bits of one instruction, including the 4-bit opcode.
constexpr int instruction_width(Op op) {
    switch (op) {
        case Op::Halt:
        case Op::Accept:
        case Op::Reject:
        case Op::Unknown:
        case Op::Emit0:
        case Op::Emit1: return 4;
        case Op::Read:
        case Op::Inc:
        case Op::Dec: return 6;
        case Op::Cpy: return 8;
        case Op::Jmp: return 10;
        case Op::Jz: return 12;
    }
    return 0;
}

struct ExecutionBudget {
    std::uint64_t max_steps = 0;
};

enum class Verdict : std::uint8_t { Reject = 0, Accept = 1, Unknown = 2 };

struct RunOutcome {
    enum class Kind : std::uint8_t { HaltedOutput, HaltedVerdict, OutOfTime, Malformed };
    Kind kind = Kind::Malformed;
    Verdict verdict = Verdict::Unknown;  // acceptor mode only
    BitString output;                    // generator mode only
    std::uint64_t steps_used = 0;
    bool input_eof = false;  // a READ ran past the end of the input
};

// --- decoding --------------------------------------------------------------

namespace detail {

inline std::uint32_t get_field(const std::uint64_t* w, std::uint32_t pos, std::uint32_t k) {
    std::uint32_t wi = pos >> 6, off = pos & 63;
    std::uint64_t v = w[wi] >> off;
    if (off + k > 64) v |= w[wi + 1] << (64 - off);
    return static_cast<std::uint32_t>(v & ((std::uint64_t{1} << k) - 1));
}

/// Decodes the full bitstring into `out` (capacity `cap`). Returns the
/// instruction count, or -1 if any opcode is undefined or any field is
/// truncated. Work is O(len); never loops.
inline int decode_into(const std::uint64_t* words, std::uint32_t len, Instruction* out, int cap) {
    std::uint32_t pos = 0;
    int n = 0;
    while (pos < len) {
        if (len - pos < 4) return -1;  // truncated opcode
        std::uint32_t opv = get_field(words, pos, 4);
        if (opv > 11) return -1;  // undefined opcode
        Op op = static_cast<Op>(opv);
        std::uint32_t w = static_cast<std::uint32_t>(instruction_width(op));
        if (len - pos < w) return -1;  // truncated operand
        if (n == cap) return -1;       // caller buffer too small; callers size cap >= len/4
        Instruction ins{op, 0, 0, 0};
        switch (op) {
            case Op::Read:
            case Op::Inc:
            case Op::Dec:
                ins.r = static_cast<std::uint8_t>(get_field(words, pos + 4, 2));
                break;
            case Op::Cpy:
                ins.r = static_cast<std::uint8_t>(get_field(words, pos + 4, 2));
                ins.s = static_cast<std::uint8_t>(get_field(words, pos + 6, 2));
                break;
            case Op::Jz: {
                ins.r = static_cast<std::uint8_t>(get_field(words, pos + 4, 2));
                std::uint32_t d = get_field(words, pos + 6, 6);
                ins.delta = static_cast<std::int8_t>(d >= 32 ? static_cast<int>(d) - 64
                                                             : static_cast<int>(d));
                break;
            }
            case Op::Jmp: {
                std::uint32_t d = get_field(words, pos + 4, 6);
                ins.delta = static_cast<std::int8_t>(d >= 32 ? static_cast<int>(d) - 64
                                                             : static_cast<int>(d));
                break;
            }
            default: break;
        }
        out[n++] = ins;
        pos += w;
    }
    return n;
}

/// Acceptor run without allocations. Returns 0, 1, or 2 (= ⊥); running out
/// of time reports 2, matching how every consistency check treats it.
inline std::uint8_t run_acceptor_verdict(const Instruction* code, int n, const std::uint64_t* in,
                                         std::uint32_t in_len, std::uint64_t budget) {
    std::uint64_t regs[4] = {0, 0, 0, 0};
    std::uint32_t inpos = 0;
    std::int32_t pc = 0;
    std::uint64_t steps = 0;
    for (;;) {
        if (pc < 0 || pc >= n) return 2;      // fell off the program: no verdict
        if (steps == budget) return 2;        // out of time
        ++steps;
        const Instruction& ins = code[pc];
        switch (ins.op) {
            case Op::Halt:
            case Op::Unknown: return 2;
            case Op::Accept: return 1;
            case Op::Reject: return 0;
            case Op::Emit0:
            case Op::Emit1: ++pc; break;
            case Op::Read:
                if (inpos < in_len) {
                    regs[ins.r] = (in[inpos >> 6] >> (inpos & 63)) & 1;
                    ++inpos;
                } else {
                    regs[ins.r] = 0;
                }
                ++pc;
                break;
            case Op::Inc: ++regs[ins.r]; ++pc; break;
            case Op::Dec: --regs[ins.r]; ++pc; break;
            case Op::Cpy: regs[ins.r] = regs[ins.s]; ++pc; break;
            case Op::Jz: pc = (regs[ins.r] == 0) ? pc + ins.delta : pc + 1; break;
            case Op::Jmp: pc += ins.delta; break;
        }
    }
}

/// Generator run that checks the output against a fixed target as it is
/// emitted. Returns true iff the program halts within budget having written
/// exactly the target. Mismatches and overlong outputs abort early; an
/// append-only tape can never recover from either.
inline bool run_generator_matches(const Instruction* code, int n, std::uint64_t budget,
                                  const std::uint64_t* target, std::uint32_t target_len) {
    std::uint64_t regs[4] = {0, 0, 0, 0};
    std::uint32_t out_len = 0;
    std::int32_t pc = 0;
    std::uint64_t steps = 0;
    for (;;) {
        if (pc < 0 || pc >= n) return out_len == target_len;
        if (steps == budget) return false;
        ++steps;
        const Instruction& ins = code[pc];
        switch (ins.op) {
            case Op::Halt:
            case Op::Accept:
            case Op::Reject:
            case Op::Unknown: return out_len == target_len;
            case Op::Emit0:
            case Op::Emit1: {
                if (out_len == target_len) return false;
                bool want = ((target[out_len >> 6] >> (out_len & 63)) & 1) != 0;
                if (want != (ins.op == Op::Emit1)) return false;
                ++out_len;
                ++pc;
                break;
            }
            case Op::Read: regs[ins.r] = 0; ++pc; break;  // generator input is empty
            case Op::Inc: ++regs[ins.r]; ++pc; break;
            case Op::Dec: --regs[ins.r]; ++pc; break;
            case Op::Cpy: regs[ins.r] = regs[ins.s]; ++pc; break;
            case Op::Jz: pc = (regs[ins.r] == 0) ? pc + ins.delta : pc + 1; break;
            case Op::Jmp: pc += ins.delta; break;
        }
    }
}

/// Generator run collecting at most `cap` (<= 64) output bits into a word.
/// Returns true iff the program halts within budget without exceeding cap.
inline bool run_generator_collect(const Instruction* code, int n, std::uint64_t budget,
                                  std::uint64_t* out_bits, std::uint32_t* out_len,
                                  std::uint32_t cap) {
    std::uint64_t regs[4] = {0, 0, 0, 0};
    std::uint64_t out = 0;
    std::uint32_t out_n = 0;
    std::int32_t pc = 0;
    std::uint64_t steps = 0;
    for (;;) {
        if (pc < 0 || pc >= n) {
            *out_bits = out;
            *out_len = out_n;
            return true;
        }
        if (steps == budget) return false;
        ++steps;
        const Instruction& ins = code[pc];
        switch (ins.op) {
            case Op::Halt:
            case Op::Accept:
            case Op::Reject:
            case Op::Unknown:
                *out_bits = out;
                *out_len = out_n;
                return true;
            case Op::Emit0:
            case Op::Emit1:
                if (out_n == cap) return false;
                if (ins.op == Op::Emit1) out |= std::uint64_t{1} << out_n;
                ++out_n;
                ++pc;
                break;
            case Op::Read: regs[ins.r] = 0; ++pc; break;
            case Op::Inc: ++regs[ins.r]; ++pc; break;
            case Op::Dec: --regs[ins.r]; ++pc; break;
            case Op::Cpy: regs[ins.r] = regs[ins.s]; ++pc; break;
            case Op::Jz: pc = (regs[ins.r] == 0) ? pc + ins.delta : pc + 1; break;
            case Op::Jmp: pc += ins.delta; break;
        }
    }
}

/// True if no instruction is JZ: control flow, verdict and output are then
/// independent of the input, so one run stands for the whole universe.
inline bool input_oblivious(const Instruction* code, int n) {
    for (int i = 0; i < n; ++i)
        if (code[i].op == Op::Jz) return false;
    return true;
}

}  // namespace detail

/// Decodes a program, or nullopt if any opcode is undefined or any field
/// (opcode or operand) is truncated.
std::optional<std::vector<Instruction>> decode(const BitString& program);

/// Re-encodes an instruction list to bits (inverse of decode).
BitString encode(const std::vector<Instruction>& instructions);

RunOutcome run_generator(const BitString& program, ExecutionBudget budget);
RunOutcome run_acceptor(const BitString& program, const BitString& input, ExecutionBudget budget);

/// Textual assembler: one mnemonic per line ("JZ R0 +2"), '#' comments.
/// Throws std::invalid_argument with a line number on bad input.
BitString assemble(const std::string& text);

/// Inverse of assemble for well-formed programs; throws on malformed bits.
std::string disassemble(const BitString& program);

/// Number of programs of length 0..max_len: 2^(max_len+1) - 1.
std::uint64_t program_count(int max_len);

/// Visits every bitstring of length 0..max_len exactly once, in
/// length-then-lexicographic order.
template <class Fn>
void enumerate_programs(int max_len, Fn&& fn) {
    for (int len = 0; len <= max_len; ++len) {
        std::uint64_t count = std::uint64_t{1} << len;
        for (std::uint64_t v = 0; v < count; ++v) fn(BitString::from_value(v, len));
    }
}

}  // namespace queasylab
