// Command-line front end: single runs, |b|^2 x |d|^2 sweeps, and a
// randomized invariant checker. Results go to stdout or a file as CSV or
// JSON; diagnostics go to the error stream.
//
// Exit statuses: 0 ok, 2 usage/parse error, 3 parameter validation error,
// 4 invariant failure in verify, 1 I/O or internal error.
#pragma once

#include "iontele/protocol.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace iontele::cli {

// Accepts 're', 're+imi', 'imi' ('i' alone meaning 1i), or 'mag@phase' with
// the phase in radians. Throws std::invalid_argument on malformed input.
Cx parse_complex(const std::string& text);

struct RunConfig {
    ProtocolParams params{
        // Generic fully complex payload; channels maximally entangled.
        Cx{0.5, 0.0}, Cx{0.0, 0.5}, Cx{0.5, 0.0}, Cx{-0.5, 0.0},
        Cx{std::sqrt(0.5), 0.0}, Cx{std::sqrt(0.5), 0.0},
        Cx{std::sqrt(0.5), 0.0}, Cx{std::sqrt(0.5), 0.0}};
    RunMode mode = RunMode::enumerate;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    int mode_dim = 4;
    unsigned threads = 1;
    double phi = 0.0;
    std::string format = "json";  // "csv" | "json"
    std::string out_path;         // empty = stdout
};

struct SweepConfig {
    Cx alpha{0.5, 0.0}, beta{0.0, 0.5}, gamma{0.5, 0.0}, delta{-0.5, 0.0};
    std::array<double, 4> theta{0.0, 0.0, 0.0, 0.0};  // channel phases
    double b2_min = -1.0;  // < 0 = auto: b2_max / b2_steps
    double b2_max = 0.5;
    int b2_steps = 5;
    double d2_min = -1.0;
    double d2_max = 0.5;
    int d2_steps = 5;
    RunMode mode = RunMode::enumerate;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    int mode_dim = 4;
    unsigned threads = 1;
    std::string format = "csv";
    std::string out_path;
};

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(std::uint64_t seed, std::uint64_t trials, int mode_dim,
               std::ostream& out, std::ostream& err);

// Full argv dispatcher used by the binary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iontele::cli
