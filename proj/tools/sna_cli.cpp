#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sna/controlled.hpp"
#include "sna/errors.hpp"
#include "sna/netlist.hpp"
#include "sna/randckt.hpp"
#include "sna/report.hpp"
#include "sna/verify.hpp"

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw sna::Error(sna::ErrorCode::Syntax, "cannot read '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Parses "name=value" pairs; returns false on a malformed pair.
bool parse_bindings(const std::vector<std::string>& pairs,
                    std::map<sna::Symbol, sna::Rational>& bindings)
{
    for (const std::string& pair : pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "usage error: binding '" << pair << "' is not name=value\n";
            return false;
        }
        const auto value = sna::parse_rational(pair.substr(eq + 1));
        if (!value) {
            std::cerr << "usage error: binding '" << pair << "' has a malformed value\n";
            return false;
        }
        bindings[pair.substr(0, eq)] = *value;
    }
    return true;
}

int run_analyze(const std::string& file, const std::string& format, bool trace)
{
    const sna::Circuit circuit = sna::parse_netlist(read_file(file));
    const sna::Analysis analysis = sna::analyze(circuit);
    const sna::AnalysisReport report = sna::build_report(analysis, std::nullopt, trace);
    if (format == "json") {
        std::cout << sna::render_json(report);
    } else if (format == "latex") {
        std::cout << sna::render_latex(report);
    } else {
        std::cout << sna::render_text(report);
    }
    return 0;
}

int run_solve(const std::string& file, const std::map<sna::Symbol, sna::Rational>& bindings)
{
    const sna::Circuit circuit = sna::parse_netlist(read_file(file));
    const sna::Circuit bound = sna::bind_values(circuit, bindings);
    const sna::DifferentialVerdict verdict = sna::differential_check(bound);
    if (verdict.status == sna::DifferentialVerdict::Status::PassByAgreement) {
        sna::solve_circuit(bound);
        throw sna::Error(sna::ErrorCode::SingularSystem, verdict.detail);
    }
    if (verdict.status == sna::DifferentialVerdict::Status::Fail) {
        std::cerr << "error: oracle cross-check failed: " << verdict.detail << "\n";
        return 1;
    }
    for (const auto& [node, value] : verdict.sna->node_voltages) {
        std::cout << sna::unknown_token(node) << " = " << sna::to_string(value) << "\n";
    }
    for (const auto& [element, value] : verdict.sna->branch_currents) {
        std::cout << "i(" << element << ") = " << sna::to_string(value) << "\n";
    }
    return 0;
}

int run_check(const std::string& file, const std::map<sna::Symbol, sna::Rational>& bindings)
{
    const sna::Circuit circuit = sna::parse_netlist(read_file(file));
    const sna::Circuit bound = sna::bind_values(circuit, bindings);
    const sna::DifferentialVerdict verdict = sna::differential_check(bound);
    const char* label = verdict.status == sna::DifferentialVerdict::Status::Pass
                            ? "PASS"
                            : (verdict.ok() ? "PASS (agreement)" : "FAIL");
    std::cout << label << ": " << verdict.detail << "\n";
    return verdict.ok() ? 0 : 1;
}

sna::GenOptions fuzz_options(std::uint64_t seed, int index, int max_nodes)
{
    sna::GenOptions options;
    options.seed = seed * 1000003ull + static_cast<std::uint64_t>(index);
    options.max_nodes = max_nodes;
    switch (index % 5) {
    case 0:
        options.admittances_only = true;
        break;
    case 1:
        break;
    case 2:
        options.allow_controlled = true;
        break;
    case 3:
        options.allow_consistent_loops = true;
        break;
    default:
        options.allow_controlled = true;
        options.control_through_vsource = true;
        break;
    }
    return options;
}

int run_fuzz(int count, std::uint64_t seed, int max_nodes)
{
    int failures = 0;
    for (int i = 0; i < count; ++i) {
        const sna::Circuit circuit = sna::random_circuit(fuzz_options(seed, i, max_nodes));
        const sna::DifferentialVerdict verdict = sna::differential_check(circuit);
        if (verdict.ok()) {
            continue;
        }
        ++failures;
        const std::string path = "fuzz-fail-" + std::to_string(seed) + "-" + std::to_string(i)
                                 + ".ckt";
        std::ofstream out(path);
        out << sna::serialize_netlist(circuit);
        std::cerr << "FAIL [" << i << "]: " << verdict.detail << " (netlist: " << path << ")\n";
    }
    std::cout << (count - failures) << "/" << count << " circuits passed\n";
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Symbolic supernodal analysis of linear circuits"};
    app.require_subcommand(1);

    std::string file;
    std::string format = "text";
    bool trace = false;
    auto* analyze = app.add_subcommand("analyze", "Print the reduced system and expressions");
    analyze->add_option("file", file, "Netlist file")->required();
    analyze->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "latex", "json"}));
    analyze->add_flag("--trace", trace, "Annotate entries with contributing elements");

    std::vector<std::string> bind_pairs;
    auto* solve = app.add_subcommand("solve", "Solve numerically under bindings");
    solve->add_option("file", file, "Netlist file")->required();
    solve->add_option("--bind", bind_pairs, "Symbol bindings name=value");

    auto* check = app.add_subcommand("check", "Differential check against the oracle");
    check->add_option("file", file, "Netlist file")->required();
    check->add_option("--bind", bind_pairs, "Symbol bindings name=value");

    int count = 50;
    std::uint64_t seed = 0;
    int max_nodes = 8;
    auto* fuzz = app.add_subcommand("fuzz", "Random differential campaign");
    fuzz->add_option("--count", count, "Number of circuits");
    fuzz->add_option("--seed", seed, "Campaign seed");
    fuzz->add_option("--max-nodes", max_nodes, "Node budget per circuit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        app.exit(e);
        return 2;
    }

    std::map<sna::Symbol, sna::Rational> bindings;
    if (!parse_bindings(bind_pairs, bindings)) {
        return 2;
    }

    try {
        if (analyze->parsed()) {
            return run_analyze(file, format, trace);
        }
        if (solve->parsed()) {
            return run_solve(file, bindings);
        }
        if (check->parsed()) {
            return run_check(file, bindings);
        }
        return run_fuzz(count, seed, max_nodes);
    } catch (const sna::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
