#include "queasylab/machine.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace queasylab {

namespace {

void append_field(BitString& out, std::uint32_t value, int bits) {
    // Little-endian within the stream: least significant bit first.
    for (int i = 0; i < bits; ++i) out.push_back(((value >> i) & 1) != 0);
}

struct MachineState {
    std::uint64_t regs[4] = {0, 0, 0, 0};
    std::uint32_t inpos = 0;
    bool eof = false;
};

}  // namespace

std::optional<std::vector<Instruction>> decode(const BitString& program) {
    std::vector<Instruction> out;
    out.resize(program.size() / 4 + 1);
    int n = detail::decode_into(program.words(), static_cast<std::uint32_t>(program.size()),
                                out.data(), static_cast<int>(out.size()));
    if (n < 0) return std::nullopt;
    out.resize(static_cast<std::size_t>(n));
    return out;
}

BitString encode(const std::vector<Instruction>& instructions) {
    BitString bits;
    for (const Instruction& ins : instructions) {
        append_field(bits, static_cast<std::uint32_t>(ins.op), 4);
        switch (ins.op) {
            case Op::Read:
            case Op::Inc:
            case Op::Dec: append_field(bits, ins.r, 2); break;
            case Op::Cpy:
                append_field(bits, ins.r, 2);
                append_field(bits, ins.s, 2);
                break;
            case Op::Jz:
                append_field(bits, ins.r, 2);
                append_field(bits, static_cast<std::uint32_t>(ins.delta) & 63u, 6);
                break;
            case Op::Jmp: append_field(bits, static_cast<std::uint32_t>(ins.delta) & 63u, 6); break;
            default: break;
        }
    }
    return bits;
}

namespace {

RunOutcome run_impl(const BitString& program, const BitString* input, ExecutionBudget budget,
                    bool acceptor_mode) {
    RunOutcome out;
    auto decoded = decode(program);
    if (!decoded) {
        out.kind = RunOutcome::Kind::Malformed;
        return out;
    }
    const std::vector<Instruction>& code = *decoded;
    const int n = static_cast<int>(code.size());
    MachineState st;
    std::int32_t pc = 0;
    std::uint64_t steps = 0;

    auto halt_with = [&](Verdict v) {
        out.kind = acceptor_mode ? RunOutcome::Kind::HaltedVerdict : RunOutcome::Kind::HaltedOutput;
        out.verdict = v;
        out.steps_used = steps;
        out.input_eof = st.eof;
        return out;
    };

    for (;;) {
        if (pc < 0 || pc >= n) return halt_with(Verdict::Unknown);
        if (steps == budget.max_steps) {
            out.kind = RunOutcome::Kind::OutOfTime;
            out.steps_used = steps;
            out.input_eof = st.eof;
            return out;
        }
        ++steps;
        const Instruction& ins = code[static_cast<std::size_t>(pc)];
        switch (ins.op) {
            case Op::Halt:
            case Op::Unknown: return halt_with(Verdict::Unknown);
            case Op::Accept: return halt_with(Verdict::Accept);
            case Op::Reject: return halt_with(Verdict::Reject);
            case Op::Emit0:
                out.output.push_back(false);
                ++pc;
                break;
            case Op::Emit1:
                out.output.push_back(true);
                ++pc;
                break;
            case Op::Read:
                if (input != nullptr && st.inpos < input->size()) {
                    st.regs[ins.r] = (*input)[st.inpos] ? 1 : 0;
                    ++st.inpos;
                } else {
                    st.regs[ins.r] = 0;
                    st.eof = true;
                }
                ++pc;
                break;
            case Op::Inc: ++st.regs[ins.r]; ++pc; break;
            case Op::Dec: --st.regs[ins.r]; ++pc; break;
            case Op::Cpy: st.regs[ins.r] = st.regs[ins.s]; ++pc; break;
            case Op::Jz: pc = (st.regs[ins.r] == 0) ? pc + ins.delta : pc + 1; break;
            case Op::Jmp: pc += ins.delta; break;
        }
    }
}

}  // namespace

RunOutcome run_generator(const BitString& program, ExecutionBudget budget) {
    return run_impl(program, nullptr, budget, /*acceptor_mode=*/false);
}

RunOutcome run_acceptor(const BitString& program, const BitString& input, ExecutionBudget budget) {
    return run_impl(program, &input, budget, /*acceptor_mode=*/true);
}

namespace {

const char* mnemonic(Op op) {
    switch (op) {
        case Op::Halt: return "HALT";
        case Op::Accept: return "ACCEPT";
        case Op::Reject: return "REJECT";
        case Op::Unknown: return "UNKNOWN";
        case Op::Emit0: return "EMIT0";
        case Op::Emit1: return "EMIT1";
        case Op::Read: return "READ";
        case Op::Inc: return "INC";
        case Op::Dec: return "DEC";
        case Op::Jz: return "JZ";
        case Op::Jmp: return "JMP";
        case Op::Cpy: return "CPY";
    }
    return "?";
}

[[noreturn]] void asm_error(int line, const std::string& msg) {
    throw std::invalid_argument("assemble: line " + std::to_string(line) + ": " + msg);
}

std::uint8_t parse_register(const std::string& tok, int line) {
    if (tok.size() == 2 && (tok[0] == 'R' || tok[0] == 'r') && tok[1] >= '0' && tok[1] <= '3')
        return static_cast<std::uint8_t>(tok[1] - '0');
    asm_error(line, "expected register R0..R3, got '" + tok + "'");
}

std::int8_t parse_offset(const std::string& tok, int line) {
    long v = 0;
    bool ok = !tok.empty();
    if (ok) {
        std::size_t used = 0;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            ok = false;
        }
        if (used != tok.size()) ok = false;
    }
    if (!ok) asm_error(line, "expected signed offset, got '" + tok + "'");
    if (v < -32 || v > 31) asm_error(line, "offset out of range [-32, 31]");
    return static_cast<std::int8_t>(v);
}

}  // namespace

BitString assemble(const std::string& text) {
    std::vector<Instruction> code;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string op_tok;
        if (!(ls >> op_tok)) continue;
        for (char& c : op_tok) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));

        auto take = [&](const char* what) {
            std::string t;
            if (!(ls >> t)) asm_error(line_no, std::string("missing ") + what);
            return t;
        };
        Instruction ins{};
        if (op_tok == "HALT")
            ins.op = Op::Halt;
        else if (op_tok == "ACCEPT")
            ins.op = Op::Accept;
        else if (op_tok == "REJECT")
            ins.op = Op::Reject;
        else if (op_tok == "UNKNOWN")
            ins.op = Op::Unknown;
        else if (op_tok == "EMIT0")
            ins.op = Op::Emit0;
        else if (op_tok == "EMIT1")
            ins.op = Op::Emit1;
        else if (op_tok == "READ" || op_tok == "INC" || op_tok == "DEC") {
            ins.op = op_tok == "READ" ? Op::Read : (op_tok == "INC" ? Op::Inc : Op::Dec);
            ins.r = parse_register(take("register"), line_no);
        } else if (op_tok == "CPY") {
            ins.op = Op::Cpy;
            ins.r = parse_register(take("destination register"), line_no);
            ins.s = parse_register(take("source register"), line_no);
        } else if (op_tok == "JZ") {
            ins.op = Op::Jz;
            ins.r = parse_register(take("register"), line_no);
            ins.delta = parse_offset(take("offset"), line_no);
        } else if (op_tok == "JMP") {
            ins.op = Op::Jmp;
            ins.delta = parse_offset(take("offset"), line_no);
        } else {
            asm_error(line_no, "unknown mnemonic '" + op_tok + "'");
        }
        std::string extra;
        if (ls >> extra) asm_error(line_no, "trailing token '" + extra + "'");
        code.push_back(ins);
    }
    return encode(code);
}

std::string disassemble(const BitString& program) {
    auto decoded = decode(program);
    if (!decoded) throw std::invalid_argument("disassemble: malformed program");
    std::string out;
    for (const Instruction& ins : *decoded) {
        out += mnemonic(ins.op);
        switch (ins.op) {
            case Op::Read:
            case Op::Inc:
            case Op::Dec: out += " R" + std::to_string(ins.r); break;
            case Op::Cpy: out += " R" + std::to_string(ins.r) + " R" + std::to_string(ins.s); break;
            case Op::Jz:
                out += " R" + std::to_string(ins.r) + " " + std::to_string(ins.delta);
                break;
            case Op::Jmp: out += " " + std::to_string(ins.delta); break;
            default: break;
        }
        out += "\n";
    }
    return out;
}

std::uint64_t program_count(int max_len) {
    if (max_len < 0) return 0;
    return (std::uint64_t{1} << (max_len + 1)) - 1;
}

}  // namespace queasylab
