// queasylab: batch command-line surface for the complexity laboratory.
//
// Exit codes: 0 ok, 1 usage or invalid input, 2 censored-only results,
// 3 internal invariant violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "queasylab/complexity.hpp"
#include "queasylab/machine.hpp"
#include "queasylab/metrics.hpp"
#include "queasylab/problems.hpp"
#include "queasylab/pruning.hpp"
#include "queasylab/quantum.hpp"
#include "queasylab/reduction.hpp"
#include "queasylab/report.hpp"
#include "queasylab/rng.hpp"

namespace {

using namespace queasylab;

[[noreturn]] void fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(1);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_usage("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& data) {
    if (!path) {
        std::cout << data;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) fail_usage("cannot write '" + *path + "'");
    out << data;
}

/// Instance forms: "0b1011" (bits), "x:a" (a FAC pair, encoded with the pair
/// codec), otherwise hex (4 bits per digit).
BitString parse_instance(const std::string& spec, std::string* fac_hint) {
    if (spec.rfind("0b", 0) == 0) return BitString::from_string(spec.substr(2));
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        std::uint64_t x = std::stoull(spec.substr(0, colon));
        BitString a = BitString::from_string(spec.substr(colon + 1));
        if (fac_hint != nullptr) *fac_hint = "fac";
        return encode_pair(x, a);
    }
    return BitString::from_hex(spec);
}

LanguageOracle language_by_name(const std::string& name) {
    if (name == "parity") return parity_language();
    if (name == "coparity") return odd_zero_parity_language();
    if (name == "full") return full_language();
    if (name == "empty") return empty_language();
    if (name == "fac") return fac_language();
    fail_usage("unknown language '" + name + "'");
}

nlohmann::json load_config(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        fail_usage("config: " + std::string(e.what()));
    }
}

/// Flags win over config-file values: only options the user left untouched
/// are filled from the file.
template <class T>
void merge_key(const nlohmann::json& cfg, const CLI::Option* opt, const char* key, T& var) {
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg.contains(key)) var = cfg.at(key).get<T>();
}

// --- complexity ---------------------------------------------------------------

struct ComplexityArgs {
    std::string instance;
    std::string language = "parity";
    int max_len = 14;
    std::uint64_t budget = 256;
    std::string universe = "same_length";
    int universe_n = -1;
    bool quantum = false;
    double epsilon = kDefaultQuantumEpsilon;
    std::optional<std::string> out;
};

int run_complexity(const ComplexityArgs& args) {
    if (args.max_len > kDefaultMaxProgramLen)
        fail_usage("--max-len above " + std::to_string(kDefaultMaxProgramLen) +
                   " (enumeration cost over 2^27 runs)");
    std::string language_name = args.language;
    BitString x = parse_instance(args.instance, &language_name);
    if (x.empty()) fail_usage("empty instance");
    LanguageOracle language = language_by_name(language_name);

    SearchLimits limits;
    limits.max_program_len = args.max_len;
    limits.step_budget = {args.budget};
    int un = args.universe_n >= 0 ? args.universe_n : static_cast<int>(x.size());
    if (args.universe == "same_length")
        limits.universe = UniverseSpec::same_length(un);
    else if (args.universe == "up_to_length")
        limits.universe = UniverseSpec::up_to_length(un);
    else
        fail_usage("unknown universe kind '" + args.universe + "'");
    if (!limits.universe.contains(x)) fail_usage("instance not in the chosen universe");

    ComplexityReport report;
    report.instance = x;
    report.language = language.name;
    report.universe = limits.universe;
    report.step_budget = args.budget;
    report.max_program_len = args.max_len;

    BatchRequest req;
    req.limits = limits;
    req.languages = {language};
    BatchResult batch = batch_search(req);
    int idx = -1;
    for (std::size_t i = 0; i < batch.members.size(); ++i)
        if (batch.members[i] == x) idx = static_cast<int>(i);
    report.c = batch.c[static_cast<std::size_t>(idx)];
    report.cd = batch.cd[static_cast<std::size_t>(idx)];
    report.ic = batch.ic[0][static_cast<std::size_t>(idx)];

    if (args.quantum) {
        report.epsilon = args.epsilon;
        report.qc = qc_t(x, args.epsilon, limits);
        QuantumBatchResult qb = quantum_batch_search(limits, args.epsilon, {language}, false, true);
        for (std::size_t i = 0; i < qb.members.size(); ++i) {
            if (qb.members[i] != x) continue;
            report.qcd = qb.qcd[i];
            report.qic = qb.qic[0][i];
        }
    }

    write_output(args.out, report_to_json(report));
    return report.all_censored() ? 2 : 0;
}

// --- reduce ---------------------------------------------------------------------

int run_reduce(std::uint64_t x, const std::string& a_bits, const std::optional<std::string>& out) {
    FacInstance z{x, BitString::from_string(a_bits)};
    ReductionArtifact art = reduce_to_sat(z);
    std::string dimacs = emit_dimacs(art.formula);

    FacInstance back = invert_reduction(parse_dimacs(dimacs));
    if (back.x != z.x || !(back.a == z.a)) {
        std::cerr << "internal: inversion self-check failed\n";
        return 3;
    }
    std::string check = std::to_string(back.x) + ":" + back.a.to_string();
    if (out) {
        write_output(out, dimacs);
        std::cout << check << "\n";
    } else {
        std::cout << dimacs;
        std::cerr << check << "\n";
    }
    return 0;
}

// --- prune ---------------------------------------------------------------------

int run_prune(std::uint64_t x, int adversaries, std::uint64_t seed, int k_width,
              const std::optional<std::string>& out) {
    std::vector<CandidateDecider> pool;
    pool.push_back(oracle_decider());
    for (int i = 0; i < adversaries; ++i) pool.push_back(adversarial_decider(seed, i));
    PruneResult result = extend_and_prune(x, pool, k_width);

    std::ostringstream trace;
    for (const auto& round : result.trace) {
        nlohmann::ordered_json j;
        j["round"] = round.round;
        j["good_before"] = round.good_before;
        j["good_after"] = round.good_after;
        j["pos_before"] = round.pos_before;
        j["pos_after"] = round.pos_after;
        j["calls"] = round.calls;
        j["ejected"] = round.ejected;
        trace << j.dump() << "\n";
    }
    nlohmann::ordered_json final_line;
    final_line["factor_bits"] = result.factor_bits.to_string();
    final_line["rounds"] = result.rounds;
    final_line["calls"] = result.decider_calls;
    trace << final_line.dump() << "\n";
    write_output(out, trace.str());
    return 0;
}

// --- amplify ---------------------------------------------------------------------

int run_amplify(double epsilon, const std::optional<std::string>& circuit_path,
                const std::string& target_bits, const std::vector<int>& copies,
                std::uint64_t seed, int trials, const std::optional<std::string>& out) {
    GateCircuit circuit;
    BitString target;
    if (circuit_path) {
        circuit = parse_circuit_text(read_file(*circuit_path));
        if (target_bits.empty()) fail_usage("--target required with --circuit");
        target = BitString::from_string(target_bits);
    } else if (epsilon == 0.5) {
        // The built-in epsilon = 1/2 preparation: one Hadamard, target "0".
        circuit.qubit_count = 1;
        circuit.gates = {{GateKind::H, 0, 0}};
        circuit.measured = {0};
        target = BitString::from_string(target_bits.empty() ? "0" : target_bits);
    } else {
        fail_usage("only --epsilon 0.5 has a built-in circuit; pass --circuit");
    }

    std::ostringstream csv;
    csv << "# seed=" << seed << " trials=" << trials << "\n";
    csv << "n_copies,success_estimate,failure_rate,failure_bound\n";
    for (int n : copies) {
        AmplifyOutcome o = amplify(circuit, target, n, seed, trials);
        double bound = std::pow(o.plan.r, -static_cast<double>(n));
        char line[160];
        std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%.6f\n", n, o.success_estimate,
                      1.0 - o.success_estimate, bound);
        csv << line;
    }
    write_output(out, csv.str());
    return 0;
}

// --- landscape --------------------------------------------------------------------

struct LandscapeArgs {
    std::string mode = "exact";
    std::optional<std::string> instances_path;
    std::string language = "parity";
    int all_of_length = -1;
    int max_len = 18;
    std::uint64_t budget = 256;
    double epsilon = kDefaultQuantumEpsilon;
    int margin = 4;
    std::uint64_t seed = 0;
    int random_count = 0;
    int random_vars = 12;
    std::vector<std::string> reduce_specs;
    std::optional<int> declared_qic = 24;
    std::optional<std::string> out;
};

CnfFormula random_3cnf(int vars, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    CnfFormula f;
    f.variable_count = vars;
    int clause_count = static_cast<int>(4.3 * vars);
    for (int c = 0; c < clause_count; ++c) {
        std::vector<int> clause;
        while (clause.size() < 3) {
            int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(vars))) + 1;
            bool dup = false;
            for (int lit : clause)
                if (lit == v || lit == -v) dup = true;
            if (!dup) clause.push_back(rng.next_bool(0.5) ? v : -v);
        }
        f.clauses.push_back(clause);
    }
    return f;
}

int run_landscape(const LandscapeArgs& args) {
    std::string csv;
    if (args.mode == "exact") {
        std::vector<BitString> instances;
        if (args.instances_path) {
            std::istringstream in(read_file(*args.instances_path));
            std::string line;
            while (std::getline(in, line)) {
                if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
                std::istringstream ls(line);
                std::string tok;
                if (!(ls >> tok)) continue;
                instances.push_back(parse_instance(tok, nullptr));
            }
        }
        if (args.all_of_length >= 0) {
            for (const auto& m :
                 universe_members(UniverseSpec::same_length(args.all_of_length)))
                instances.push_back(m);
        }
        if (instances.empty() && !args.instances_path) fail_usage("no instances given");
        ExactLandscapeConfig cfg;
        cfg.max_program_len = args.max_len;
        cfg.classical_budget = {args.budget};
        cfg.quantum_budget = {args.budget};
        cfg.epsilon = args.epsilon;
        cfg.margin = args.margin;
        cfg.seed = args.seed;
        auto records = landscape_exact(instances, language_by_name(args.language), cfg);
        std::ostringstream head;
        head << "# mode=exact language=" << args.language << " max_len=" << args.max_len
             << " budget=" << args.budget << " epsilon=" << args.epsilon
             << " margin=" << args.margin << " seed=" << args.seed << "\n";
        csv = head.str() + records_to_csv(records);
    } else if (args.mode == "proxy") {
        std::vector<std::pair<std::string, CnfFormula>> instances;
        if (args.instances_path) {
            std::istringstream in(read_file(*args.instances_path));
            std::string path;
            while (std::getline(in, path)) {
                if (path.empty() || path[0] == '#') continue;
                instances.emplace_back(path, parse_dimacs(read_file(path)));
            }
        }
        for (const auto& spec : args.reduce_specs) {
            auto colon = spec.find(':');
            std::uint64_t x = std::stoull(spec.substr(0, colon == std::string::npos ? spec.size()
                                                                                    : colon));
            BitString a = colon == std::string::npos
                              ? BitString{}
                              : BitString::from_string(spec.substr(colon + 1));
            instances.emplace_back("reduce-" + spec, reduce_to_sat({x, a}).formula);
        }
        for (int i = 0; i < args.random_count; ++i)
            instances.emplace_back("random-" + std::to_string(i),
                                   random_3cnf(args.random_vars, args.seed,
                                               static_cast<std::uint64_t>(i) + 1));
        ProxyConfig cfg;
        cfg.portfolio = {{"unit-propagation", 8, 0},
                         {"dpll-16", 14, 16},
                         {"dpll-full", 20, 1000000}};
        cfg.declared_qic = args.declared_qic;
        cfg.margin = args.margin;
        auto records = landscape_proxy(instances, cfg, args.seed);
        std::ostringstream head;
        head << "# mode=proxy margin=" << args.margin << " seed=" << args.seed
             << " declared_qic=" << (args.declared_qic ? std::to_string(*args.declared_qic) : "-")
             << " portfolio=unit-propagation:8:0;dpll-16:14:16;dpll-full:20:1000000\n";
        csv = head.str() + records_to_csv(records);
    } else {
        fail_usage("unknown mode '" + args.mode + "'");
    }
    write_output(args.out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"queasylab: exact desk-scale complexity measures, reductions and landscapes"};
    app.require_subcommand(1);
    std::string config_path;

    // complexity
    ComplexityArgs cx;
    auto* cmd_cx = app.add_subcommand("complexity", "c/cd/ic (and optionally qc/qcd/qic) reports");
    auto* cx_instance = cmd_cx->add_option("--instance", cx.instance, "hex, 0b..., or x:a pair");
    auto* cx_language = cmd_cx->add_option("--language", cx.language, "parity|coparity|full|empty|fac");
    auto* cx_maxlen = cmd_cx->add_option("--max-len", cx.max_len, "program length cap (bits)");
    auto* cx_budget = cmd_cx->add_option("--budget", cx.budget, "step budget per run");
    auto* cx_universe = cmd_cx->add_option("--universe", cx.universe, "same_length|up_to_length");
    auto* cx_un = cmd_cx->add_option("--universe-n", cx.universe_n, "universe size parameter");
    cmd_cx->add_flag("--quantum", cx.quantum, "also run the quantum searches");
    auto* cx_eps = cmd_cx->add_option("--epsilon", cx.epsilon, "quantum threshold margin");
    std::string cx_out;
    auto* cx_out_opt = cmd_cx->add_option("--out", cx_out, "output path (default stdout)");
    cmd_cx->add_option("--config", config_path, "JSON config merged under explicit flags");

    // reduce
    std::uint64_t rx_x = 0;
    std::string rx_a;
    std::string rx_out;
    auto* cmd_rx = app.add_subcommand("reduce", "FACTOR-PREFIX to SAT, tagged and invertible");
    cmd_rx->add_option("--x", rx_x, "composite to factor")->required();
    cmd_rx->add_option("--a", rx_a, "required factor prefix (bits)");
    auto* rx_out_opt = cmd_rx->add_option("--out", rx_out, "DIMACS output path");

    // prune
    std::uint64_t pr_x = 0, pr_seed = 0;
    int pr_adversaries = 0, pr_kwidth = 1;
    std::string pr_out;
    auto* cmd_pr = app.add_subcommand("prune", "extend-and-prune factor recovery");
    cmd_pr->add_option("--x", pr_x, "integer to factor")->required();
    cmd_pr->add_option("--adversaries", pr_adversaries, "number of seeded adversaries");
    cmd_pr->add_option("--seed", pr_seed, "adversary seed");
    cmd_pr->add_option("--k-width", pr_kwidth, "extension width per round (0 = capacity rule)");
    auto* pr_out_opt = cmd_pr->add_option("--out", pr_out, "trace output path");

    // amplify
    double am_eps = 0.5;
    std::string am_circuit, am_target;
    std::vector<int> am_copies{10, 50, 200};
    std::uint64_t am_seed = 0;
    int am_trials = 1000;
    std::string am_out;
    auto* cmd_am = app.add_subcommand("amplify", "Monte-Carlo amplification success curves");
    cmd_am->add_option("--epsilon", am_eps, "0.5 selects the built-in one-Hadamard circuit");
    auto* am_circuit_opt = cmd_am->add_option("--circuit", am_circuit, "circuit text file");
    cmd_am->add_option("--target", am_target, "target bitstring");
    cmd_am->add_option("--copies", am_copies, "n_copies values")->delimiter(',');
    cmd_am->add_option("--seed", am_seed, "Monte-Carlo seed");
    cmd_am->add_option("--trials", am_trials, "trials per point");
    auto* am_out_opt = cmd_am->add_option("--out", am_out, "CSV output path");

    // landscape
    LandscapeArgs ls;
    std::string ls_instances, ls_out;
    int ls_declared_qic = 24;
    bool ls_no_declared = false;
    auto* cmd_ls = app.add_subcommand("landscape", "queasiness records over an instance batch");
    cmd_ls->add_option("--mode", ls.mode, "exact|proxy");
    auto* ls_inst_opt = cmd_ls->add_option("--instances", ls_instances,
                                           "instance list file (exact) or DIMACS paths (proxy)");
    cmd_ls->add_option("--language", ls.language, "exact-mode language");
    cmd_ls->add_option("--all-of-length", ls.all_of_length, "append every string of this length");
    cmd_ls->add_option("--max-len", ls.max_len, "exact-mode program length cap");
    cmd_ls->add_option("--budget", ls.budget, "exact-mode step budget");
    cmd_ls->add_option("--epsilon", ls.epsilon, "exact-mode quantum margin");
    cmd_ls->add_option("--margin", ls.margin, "classification margin (bits)");
    cmd_ls->add_option("--seed", ls.seed, "run seed");
    cmd_ls->add_option("--random", ls.random_count, "proxy-mode random 3-CNF count");
    cmd_ls->add_option("--random-vars", ls.random_vars, "variables per random formula");
    cmd_ls->add_option("--reduce-x", ls.reduce_specs, "proxy-mode reduction instances (x or x:a)")
        ->delimiter(',');
    cmd_ls->add_option("--declared-qic", ls_declared_qic, "declared quantum-side constant");
    cmd_ls->add_flag("--no-declared-qic", ls_no_declared, "leave the quantum side censored");
    auto* ls_out_opt = cmd_ls->add_option("--out", ls_out, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_cx->parsed()) {
            if (!config_path.empty()) {
                nlohmann::json cfg = load_config(config_path);
                merge_key(cfg, cx_instance, "instance", cx.instance);
                merge_key(cfg, cx_language, "language", cx.language);
                merge_key(cfg, cx_maxlen, "max_len", cx.max_len);
                merge_key(cfg, cx_budget, "budget", cx.budget);
                merge_key(cfg, cx_universe, "universe", cx.universe);
                merge_key(cfg, cx_un, "universe_n", cx.universe_n);
                merge_key(cfg, cx_eps, "epsilon", cx.epsilon);
                merge_key(cfg, cx_out_opt, "out", cx_out);
            }
            if (cx.instance.empty()) fail_usage("--instance is required");
            if (cx_out_opt->count() > 0 || !cx_out.empty()) cx.out = cx_out;
            return run_complexity(cx);
        }
        if (cmd_rx->parsed())
            return run_reduce(rx_x, rx_a,
                              rx_out_opt->count() > 0 ? std::optional<std::string>(rx_out)
                                                      : std::nullopt);
        if (cmd_pr->parsed())
            return run_prune(pr_x, pr_adversaries, pr_seed, pr_kwidth,
                             pr_out_opt->count() > 0 ? std::optional<std::string>(pr_out)
                                                     : std::nullopt);
        if (cmd_am->parsed())
            return run_amplify(am_eps,
                               am_circuit_opt->count() > 0 ? std::optional<std::string>(am_circuit)
                                                           : std::nullopt,
                               am_target, am_copies, am_seed, am_trials,
                               am_out_opt->count() > 0 ? std::optional<std::string>(am_out)
                                                       : std::nullopt);
        if (cmd_ls->parsed()) {
            if (ls_inst_opt->count() > 0) ls.instances_path = ls_instances;
            if (ls_no_declared)
                ls.declared_qic = std::nullopt;
            else
                ls.declared_qic = ls_declared_qic;
            if (ls_out_opt->count() > 0) ls.out = ls_out;
            return run_landscape(ls);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
