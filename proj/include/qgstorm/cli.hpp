#pragma once

#include <iosfwd>

#include "qgstorm/battery.hpp"

namespace qgstorm::cli {

// Exit codes: 0 success, 1 verification failure, 2 config error,
// 3 runtime/blow-up, 4 I/O failure.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kRuntimeError = 3;
inline constexpr int kIoError = 4;

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_ensemble(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, bool full, std::ostream& out, std::ostream& err);
int cmd_noise_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qgstorm::cli
