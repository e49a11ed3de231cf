#pragma once

#include <optional>
#include <string>

#include "pgc/harness/instance.hpp"

namespace pgc::harness {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kSchema = 2, kRejected = 3, kTheoremFailure = 4, kInternal = 5 };
int exit_code_for(ErrorKind k);

struct AnalyzeOptions {
    std::optional<double> tol_rank, tol_phase, tol_cp;
    std::optional<std::uint64_t> seed;
    bool force = false;
};

struct AnalyzeResult {
    int exit_code = kPass;
    json certificate;   // null when the instance was refused
    std::string error;  // ErrorKind-prefixed message
};

AnalyzeResult run_analyze(const InstanceSpec& spec, const AnalyzeOptions& opt = {});
// Fourier-engine checks on y of the channel only
AnalyzeResult run_qfa_check(const InstanceSpec& spec, const AnalyzeOptions& opt = {});

// canonical bytes: sorted keys, 2-space indent, shortest round-trip doubles, trailing newline
std::string dump(const json& j);
// one "path: value" line per leaf
std::string to_text(const json& j);

}  // namespace pgc::harness
