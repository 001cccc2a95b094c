#include "helpsl2/helpsolver.hpp"
#include "helpsl2/psl2.hpp"
#include "helpsl2/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace helpsl2;

std::string rat_display(const Rat& v)
{
    if (is_integer(v))
        return numerator(v).str();
    return rat_to_string(v);
}

std::string set_display(const std::vector<int>& ks)
{
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < ks.size(); ++i)
        os << (i ? "," : "") << ks[i];
    os << "}";
    return os.str();
}

void print_group(std::ostream& os, const GroupData& g)
{
    os << "group PSL(2," << g.q() << "): p = " << g.p() << ", f = " << g.f()
       << ", |G| = " << g.group_order() << ", d = " << g.d()
       << ", torus orders (" << g.order_a() << ", " << g.order_b() << ")\n";
    os << "classes:\n";
    for (const auto& c : g.classes()) {
        os << "  [" << c.id << "] " << std::left << std::setw(8) << class_label(c)
           << std::right << " order " << std::setw(4) << c.element_order << "   "
           << family_name(c.family) << "\n";
    }
}

void write_document(const ReportDocument& doc, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << doc.serialize();
    if (!out)
        throw std::runtime_error("failed while writing '" + path + "'");
}

struct JsonSink {
    bool requested = false;
    std::string path; // empty: document goes to stdout instead of human text

    bool stdout_only() const { return requested && path.empty(); }

    void deliver(const ReportDocument& doc) const
    {
        if (!requested)
            return;
        if (path.empty())
            std::cout << doc.serialize();
        else
            write_document(doc, path);
    }
};

int run_table(long long p, int f, int kmax, const JsonSink& sink)
{
    const auto start = std::chrono::steady_clock::now();
    const GroupData g = GroupData::build(p, f);
    ReportDocument doc = build_table_document(g, kmax);
    doc.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    sink.deliver(doc);
    if (sink.stdout_only())
        return 0;

    print_group(std::cout, g);
    std::cout << std::fixed << std::setprecision(3);
    for (int k = 0; k <= kmax; ++k) {
        const BrauerChar chi(g, k);
        std::cout << "phi_" << k << " (degree " << chi.degree() << "):\n";
        for (const auto& c : g.classes()) {
            if (c.family == ClassFamily::unipotent)
                continue;
            const CycloSum value = chi.value(c);
            double approx = value.numeric_embed().real();
            if (std::abs(approx) < 5e-4)
                approx = 0.0; // avoid printing -0.000
            std::cout << "  at [" << c.id << "] " << std::left << std::setw(8)
                      << class_label(c) << std::right << ": " << value.to_string()
                      << " (= " << approx << ")\n";
        }
    }
    return 0;
}

int run_solver(const std::string& command, long long p, int f, long long r, int n,
               const std::vector<int>& kset, long long bound, const JsonSink& sink)
{
    const auto start = std::chrono::steady_clock::now();
    const GroupData g = GroupData::build(p, f);
    const std::vector<int> ks = kset.empty() ? default_character_set(g, r, n) : kset;
    const SolverReport rep = verify_theorem1(g, r, n, ks, bound);
    ReportDocument doc = build_solver_document(g, command, rep);
    doc.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    sink.deliver(doc);
    const int exit_code = (command == "verify" && !rep.verified) ? 1 : 0;
    if (sink.stdout_only())
        return exit_code;

    print_group(std::cout, g);
    std::cout << "unit order " << ipow_checked(r, n) << " = " << r << "^" << n
              << "; characters " << set_display(ks) << "; bound " << bound << "\n";
    if (!rep.elements_exist)
        std::cout << "note: no elements of this order\n";
    std::cout << "admissible chains: " << rep.chains.size() << "\n";
    size_t index = 0;
    for (const auto& res : rep.chains) {
        ++index;
        std::cout << "chain " << index << (res.trivial ? " (trivial):\n" : " (NONTRIVIAL):\n");
        long long power = 1;
        for (const auto& level : res.chain.levels) {
            std::cout << "  eps(u^" << power << ") [order " << level.unit_order << "]:";
            for (const auto& [cid, eps] : level.entries)
                std::cout << " [" << cid << "]=" << eps.str();
            std::cout << "\n";
            power *= r;
        }
        for (const auto& table : res.tables) {
            std::cout << "  mu phi_" << table.k << " (mod " << table.modulus << "):";
            for (const auto& mu : table.mu)
                std::cout << " " << rat_display(mu);
            std::cout << "\n";
        }
    }
    if (command == "verify") {
        if (rep.verified)
            std::cout << "verdict: verified (every admissible chain is trivial)\n";
        else
            std::cout << "verdict: nontrivial chains present\n";
    } else {
        std::cout << "verdict: enumerated\n";
    }
    return exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact constraint solver for torsion units of prime-power order "
                 "in integral group rings of PSL(2,q)"};
    app.require_subcommand(1);

    long long p = 0;
    int f = 1;
    long long r = 0;
    int n = 1;
    int kmax = 4;
    long long bound = 5;
    std::vector<int> kset;
    std::string json_path;

    auto* table = app.add_subcommand("table", "Print modular character values on p-regular classes");
    table->add_option("--p", p, "characteristic (prime)")->required();
    table->add_option("--f", f, "field degree, q = p^f");
    table->add_option("--kmax", kmax, "print phi_0..phi_kmax");
    auto* table_json = table->add_option("--json", json_path,
                                         "emit report document (to PATH, or stdout if bare)")
                           ->expected(0, 1);

    const auto add_solver_options = [&](CLI::App* cmd) {
        cmd->add_option("--p", p, "characteristic (prime)")->required();
        cmd->add_option("--f", f, "field degree, q = p^f");
        cmd->add_option("--r", r, "prime r != p; the unit order is r^n")->required();
        cmd->add_option("--n", n, "exponent of the unit order");
        cmd->add_option("--k", kset, "character indices (comma separated); default auto")
            ->delimiter(',');
        cmd->add_option("--bound", bound, "box bound on partial augmentations");
        return cmd->add_option("--json", json_path,
                               "emit report document (to PATH, or stdout if bare)")
            ->expected(0, 1);
    };
    auto* verify = app.add_subcommand("verify", "Enumerate admissible chains and test triviality");
    auto* verify_json = add_solver_options(verify);
    auto* solve = app.add_subcommand("solve", "Enumerate admissible chains without verdict gating");
    auto* solve_json = add_solver_options(solve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        JsonSink sink;
        if (table->parsed()) {
            sink.requested = table_json->count() > 0;
            sink.path = json_path;
            return run_table(p, f, kmax, sink);
        }
        const bool is_verify = verify->parsed();
        sink.requested = (is_verify ? verify_json : solve_json)->count() > 0;
        sink.path = json_path;
        return run_solver(is_verify ? "verify" : "solve", p, f, r, n, kset, bound, sink);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
