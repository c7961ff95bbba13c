#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "lipext/extension.hpp"
#include "lipext/onto_extension.hpp"

namespace lipext {

enum class ScenarioMode { Thm1, Thm2, Constants };

struct Scenario {
    std::string name;
    ScenarioMode mode = ScenarioMode::Thm1;
    std::uint64_t seed = 0;
    std::optional<IfsSystem> source;
    std::optional<IfsSystem> target;
    SymbolicSubset subset = SymbolicSubset::whole();
    std::optional<AddressTransducer> transducer;
    ExtensionConfig config;
    std::size_t suite_samples = 1000;
};

// Reads a system description (JSON). Relative paths resolve against the file.
IfsSystem load_system(const std::string& path);
// Reads a scenario file. Malformed or inconsistent input throws InputError.
Scenario load_scenario(const std::string& path);

struct RunOptions {
    std::optional<int> depth;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

struct RunOutcome {
    int exit_code = 0; // 0 pass, 1 certification or construction failure, 2 input error
    std::string stage;
    std::string message;
};

// Runs the scenario and writes its artifacts into opts.out_dir.
RunOutcome run_scenario(const std::string& path, const RunOptions& opts, std::ostream& log);

// Human-readable summary of a run directory. Throws InputError when artifacts are missing.
std::string emit_report(const std::string& dir);

// Constants, separation and inequality checks for one system file.
RunOutcome constants_report(const std::string& system_path, int depth, std::uint64_t seed, std::size_t samples,
                            std::ostream& out);

} // namespace lipext
