// densic: exact upper/lower densities of k-automatic sets, mean values of
// automatic sequences, and synthesis of sets with prescribed densities.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "densic/asymptotics.hpp"
#include "densic/automaton.hpp"
#include "densic/constructor.hpp"
#include "densic/density.hpp"
#include "densic/kernel.hpp"
#include "densic/oracle.hpp"
#include "densic/rational.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTarget = 4;
constexpr int kExitVerify = 5;

using namespace densic;

Dfao load_automaton(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    return parse_dfao(in);
}

unsigned default_threads() {
    if (const char* env = std::getenv("DENSIC_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    }
    return 1;
}

std::string witness_text(const std::optional<Witness>& w, std::uint64_t base) {
    if (!w) return "none (trivial case)";
    return "A=" + word_string(w->a_word, base) + " B=" + word_string(w->b_word, base) +
           " j=" + std::to_string(w->j) + " value=" + rat_string(w->value);
}

const char* trivial_name(TrivialCase t) {
    switch (t) {
        case TrivialCase::zero: return "zero";
        case TrivialCase::one: return "one";
        default: return "none";
    }
}

void print_report_text(std::ostream& out, const std::string& path, bool mean,
                       const Dfao& normalized, const DensityReport& r) {
    const char* hi = mean ? "limsup" : "upper";
    const char* lo = mean ? "liminf" : "lower";
    out << "automaton: " << path << "\n";
    out << "mode: " << (mean ? "mean" : "set") << "\n";
    out << "base: " << normalized.base << "\n";
    out << "states: " << normalized.state_count() << "\n";
    out << "period: " << r.table.a << "\n";
    for (std::uint64_t j = 0; j < r.table.a; ++j)
        out << "census c[1][" << j << "] = " << rat_string(r.table.c[j][0]) << "\n";
    out << hi << " = " << rat_string(r.upper) << " (" << decimal_string(r.upper) << ")\n";
    out << lo << " = " << rat_string(r.lower) << " (" << decimal_string(r.lower) << ")\n";
    out << "witness " << hi << ": " << witness_text(r.witness_upper, normalized.base) << "\n";
    out << "witness " << lo << ": " << witness_text(r.witness_lower, normalized.base) << "\n";
    if (!mean) out << "trivial: " << trivial_name(r.trivial_case) << "\n";
}

void print_report_records(std::ostream& out, bool mean, const Dfao& normalized,
                          const DensityReport& r) {
    out << "mode=" << (mean ? "mean" : "set") << "\n";
    out << "base=" << normalized.base << "\n";
    out << "states=" << normalized.state_count() << "\n";
    out << "period=" << r.table.a << "\n";
    for (std::uint64_t j = 0; j < r.table.a; ++j)
        out << "c.1." << j << "=" << rat_string(r.table.c[j][0]) << "\n";
    out << "upper=" << rat_string(r.upper) << "\n";
    out << "upper.decimal=" << decimal_string(r.upper) << "\n";
    out << "lower=" << rat_string(r.lower) << "\n";
    out << "lower.decimal=" << decimal_string(r.lower) << "\n";
    auto emit_witness = [&](const char* key, const std::optional<Witness>& w) {
        if (!w) {
            out << "witness." << key << "=none\n";
            return;
        }
        out << "witness." << key << ".a=" << word_string(w->a_word, normalized.base) << "\n";
        out << "witness." << key << ".b=" << word_string(w->b_word, normalized.base) << "\n";
        out << "witness." << key << ".j=" << w->j << "\n";
    };
    emit_witness("upper", r.witness_upper);
    emit_witness("lower", r.witness_lower);
    if (!mean) out << "trivial=" << trivial_name(r.trivial_case) << "\n";
}

struct AnalyzeArgs {
    std::string path;
    bool mean = false;
    bool do_minimize = false;
    std::string format = "text";
    unsigned threads = 1;
    std::uint64_t max_candidates = 100'000'000;
};

int cmd_analyze(const AnalyzeArgs& args) {
    auto started = std::chrono::steady_clock::now();
    Dfao d = load_automaton(args.path);
    if (args.do_minimize) d = minimize(d);
    Dfao norm = normalize(d);
    DensityOptions opts;
    opts.max_work = args.max_candidates;
    opts.threads = args.threads;
    DensityReport report;
    if (args.mean) {
        report = mean_report(norm, opts);
    } else {
        report = densities(AutomaticSet(norm), opts);
    }
    std::ostringstream out;
    if (args.format == "records")
        print_report_records(out, args.mean, norm, report);
    else
        print_report_text(out, args.path, args.mean, norm, report);
    std::cout << out.str();
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    std::cerr << "analyze: " << elapsed << " ms\n";
    return 0;
}

int cmd_construct(const std::string& alpha, const std::string& beta, std::uint64_t base,
                  const std::string& out_path) {
    DensityTarget target;
    try {
        target.alpha = parse_rational(alpha);
        target.beta = parse_rational(beta);
    } catch (const parse_error& e) {
        std::cerr << "construct: " << e.what() << "\n";
        return kExitTarget;
    }
    target.base = base;
    ConstructParams params;
    AutomaticSet set = construct(target, &params);
    std::string text = serialize_dfao(set.dfao);
    std::ostream* info = &std::cout;
    if (out_path.empty()) {
        std::cout << text;
        info = &std::cerr;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "construct: cannot write '" << out_path << "'\n";
            return kExitParse;
        }
        out << text;
    }
    *info << "K=" << params.big_base.str() << " C=" << params.modulus.str()
          << " A=" << params.threshold_even.str() << " B=" << params.threshold_odd.str()
          << "\n";
    return 0;
}

int cmd_simulate(const std::string& path, std::uint64_t n_max, std::uint64_t stride,
                 const std::string& out_path) {
    Dfao d = load_automaton(path);
    Trace trace = simulate(d, Int(n_max), Int(stride));
    std::ostream* info = &std::cout;
    if (out_path.empty()) {
        std::cout << trace.to_csv();
        info = &std::cerr;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "simulate: cannot write '" << out_path << "'\n";
            return kExitParse;
        }
        out << trace.to_csv();
    }
    if (trace.window_hit)
        *info << "running sup = " << decimal_string(trace.running_sup)
              << ", running inf = " << decimal_string(trace.running_inf) << " (n >= "
              << trace.window_start.str() << ")\n";
    return 0;
}

int cmd_verify(const std::string& alpha, const std::string& beta, std::uint64_t base,
               std::uint64_t n_max, unsigned threads) {
    DensityTarget target;
    try {
        target.alpha = parse_rational(alpha);
        target.beta = parse_rational(beta);
    } catch (const parse_error& e) {
        std::cerr << "verify: " << e.what() << "\n";
        return kExitTarget;
    }
    target.base = base;
    ConstructParams params;
    AutomaticSet set = construct(target, &params);
    std::cout << "constructed: K=" << params.big_base.str() << " C=" << params.modulus.str()
              << " A=" << params.threshold_even.str() << " B=" << params.threshold_odd.str()
              << " states=" << set.dfao.state_count() << "\n";
    DensityOptions opts;
    opts.threads = threads;
    DensityReport report = densities(set, opts);
    std::cout << "analyzed: lower=" << rat_string(report.lower)
              << " upper=" << rat_string(report.upper) << "\n";
    if (report.lower != target.alpha || report.upper != target.beta) {
        std::cerr << "verify: exact round-trip failed (expected lower="
                  << rat_string(target.alpha) << " upper=" << rat_string(target.beta) << ")\n";
        return kExitVerify;
    }
    std::cout << "round-trip: exact\n";
    Trace trace = simulate(set.dfao, Int(n_max));
    if (!trace.window_hit) {
        std::cerr << "verify: simulation window is empty\n";
        return kExitVerify;
    }
    Rat tol(1, 50);
    Rat sup_err = trace.running_sup > target.beta ? trace.running_sup - target.beta
                                                  : target.beta - trace.running_sup;
    Rat inf_err = trace.running_inf > target.alpha ? trace.running_inf - target.alpha
                                                   : target.alpha - trace.running_inf;
    std::cout << "simulated: sup=" << decimal_string(trace.running_sup)
              << " inf=" << decimal_string(trace.running_inf) << " (n >= "
              << trace.window_start.str() << ")\n";
    if (sup_err > tol) {
        std::cerr << "verify: simulated sup is off by " << decimal_string(sup_err)
                  << " (> 0.02)\n";
        return kExitVerify;
    }
    if (inf_err > tol) {
        std::cerr << "verify: simulated inf is off by " << decimal_string(inf_err)
                  << " (> 0.02)\n";
        return kExitVerify;
    }
    std::cout << "verify: pass\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact densities of automatic sets and sequences"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    analyze_args.threads = default_threads();
    auto* analyze = app.add_subcommand("analyze", "analyze an automaton file");
    analyze->add_option("file", analyze_args.path, "DFAO file")->required();
    analyze->add_flag("--mean", analyze_args.mean,
                      "treat outputs as a rational sequence (limsup/liminf of s(n)/n)");
    analyze->add_flag("--minimize", analyze_args.do_minimize, "minimize before analysis");
    analyze->add_option("--threads", analyze_args.threads, "worker threads");
    analyze->add_option("--max-candidates", analyze_args.max_candidates,
                        "work budget for the witness optimizer");
    analyze->add_option("--format", analyze_args.format, "text or records")
        ->check(CLI::IsMember({"text", "records"}));

    std::string c_alpha, c_beta, c_out;
    std::uint64_t c_base = 2;
    auto* cons = app.add_subcommand("construct", "build a set with prescribed densities");
    cons->add_option("alpha", c_alpha, "lower density (rational)")->required();
    cons->add_option("beta", c_beta, "upper density (rational)")->required();
    cons->add_option("base", c_base, "base k")->required();
    cons->add_option("-o,--output", c_out, "output file (default: stdout)");

    std::string s_path, s_out;
    std::uint64_t s_n = 0, s_stride = 1;
    auto* sim = app.add_subcommand("simulate", "stream s(n)/n and emit a CSV trace");
    sim->add_option("file", s_path, "DFAO file")->required();
    sim->add_option("N", s_n, "horizon")->required()->check(CLI::PositiveNumber);
    sim->add_option("--stride", s_stride, "sampling stride")->check(CLI::PositiveNumber);
    sim->add_option("-o,--output", s_out, "CSV file (default: stdout)");

    std::string v_alpha, v_beta;
    std::uint64_t v_base = 2, v_n = 0;
    unsigned v_threads = default_threads();
    auto* verify = app.add_subcommand("verify", "construct, analyze and simulate a target");
    verify->add_option("alpha", v_alpha, "lower density (rational)")->required();
    verify->add_option("beta", v_beta, "upper density (rational)")->required();
    verify->add_option("base", v_base, "base k")->required();
    verify->add_option("N", v_n, "simulation horizon")->required()->check(CLI::PositiveNumber);
    verify->add_option("--threads", v_threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_args);
        if (cons->parsed()) return cmd_construct(c_alpha, c_beta, c_base, c_out);
        if (sim->parsed()) return cmd_simulate(s_path, s_n, s_stride, s_out);
        if (verify->parsed()) return cmd_verify(v_alpha, v_beta, v_base, v_n, v_threads);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTarget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
