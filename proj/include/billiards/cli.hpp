#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace billiards::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,             // bad arguments or I/O failure
    kSceneParse = 2,
    kSceneValidation = 3,   // including a perturbation that leaves the ball
    kBoundViolation = 4,
    kUnreliable = 5,        // degenerate fraction above threshold
    kVerdictFail = 6,       // santalo-check outside 3σ
};

enum class Format { Csv, Json };

struct RunConfig {
    std::string command;  // santalo-check | volume | trapped | histogram | count | sweep
    std::string scene;
    std::uint64_t seed = 1;
    std::uint64_t samples = 1'000'000;
    std::optional<double> t_max;
    std::optional<long> k_max;
    std::vector<double> epsilons;
    std::optional<double> radius;
    std::optional<std::string> out;
    Format format = Format::Csv;
    int workers = 0;
};

// Runs one subcommand. Results go to `out` (or config.out), diagnostics to
// `log`. Output depends only on the scene, seed, N and caps.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

// Parses argv and dispatches to run().
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace billiards::cli
