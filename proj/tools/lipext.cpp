#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lipext/errors.hpp"
#include "lipext/map_table.hpp"
#include "lipext/scenario.hpp"

namespace {

int report_error(const lipext::Error& e) {
    std::cerr << "lipext: " << e.what() << '\n';
    return dynamic_cast<const lipext::InputError*>(&e) ? 2 : 1;
}

int print_outcome(const lipext::RunOutcome& r) {
    if (r.exit_code != 0) std::cerr << "lipext: stage '" << r.stage << "' failed: " << r.message << '\n';
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilipschitz extension of maps between self-conformal sets"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
    std::string scenario;
    std::optional<int> depth;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    run->add_option("scenario", scenario, "Scenario file")->required();
    run->add_option("--depth", depth, "Certification depth");
    run->add_option("--seed", seed, "Sampling seed");
    run->add_option("--out", out_dir, "Output directory");

    auto* verify = app.add_subcommand("verify", "Check the bilipschitz ratios of a map table");
    std::string table_path;
    std::string net_path;
    std::optional<double> eps;
    std::optional<double> bound;
    verify->add_option("table", table_path, "Map table CSV")->required();
    verify->add_option("--onto", net_path, "Target net CSV; checks every net point is near an image");
    verify->add_option("--eps", eps, "Onto tolerance");
    verify->add_option("--bound", bound, "Fail when the table's bilipschitz constant exceeds this");

    auto* constants = app.add_subcommand("constants", "Certify the constants of a system");
    std::string system_path;
    int cdepth = 10;
    std::uint64_t cseed = 0;
    std::size_t samples = 1000;
    constants->add_option("system", system_path, "System file")->required();
    constants->add_option("--depth", cdepth, "Certification depth");
    constants->add_option("--seed", cseed, "Sampling seed");
    constants->add_option("--samples", samples, "Samples per inequality");

    auto* report = app.add_subcommand("report", "Print the summary of a run directory");
    std::string run_dir;
    report->add_option("dir", run_dir, "Run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            lipext::RunOptions opts{depth, seed, out_dir};
            return print_outcome(lipext::run_scenario(scenario, opts, std::cerr));
        }
        if (*verify) {
            if (!net_path.empty() && !eps) throw lipext::InputError("--onto needs --eps");
            lipext::MapTable table = lipext::read_table_csv(table_path);
            if (bound) table.claimed_bound = *bound;
            lipext::VerifyReport rep;
            if (net_path.empty()) {
                rep = lipext::verify_map_table(table, nullptr, 0.0, lipext::VerifyMode::Into);
            } else {
                auto net = lipext::read_points_csv(net_path);
                rep = lipext::verify_map_table(table, &net, *eps, lipext::VerifyMode::Onto);
            }
            std::cout << lipext::format_verdict(rep);
            return rep.passed ? 0 : 1;
        }
        if (*constants) {
            return print_outcome(lipext::constants_report(system_path, cdepth, cseed, samples, std::cout));
        }
        if (*report) {
            std::cout << lipext::emit_report(run_dir);
            return 0;
        }
    } catch (const lipext::Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "lipext: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
