// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic rendering of evaluation results as JSON, CSV, or a
// fixed-width text table.  Every rendering embeds the resolved run
// configuration (when provided) and the tool version.

#ifndef SSLKIT_EVAL_REPORT_HPP_
#define SSLKIT_EVAL_REPORT_HPP_

#include <string>

#include "sslkit/eval/metrics.hpp"

namespace sslkit::eval {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ReportFormat { kJson, kCsv, kTable };

// Parses a format name ("json", "csv", "table"); throws ConfigError
// otherwise.
ReportFormat parse_report_format(const std::string& name);

// config_echo: the resolved configuration as a JSON object in text form;
// pass "" to omit.  CSV carries it as a comment line, the table as a
// header line.
std::string render_known(const KnownNReport& report, ReportFormat format,
                         const std::string& config_echo);

std::string render_pr(const PrCurve& curve, ReportFormat format,
                      const std::string& config_echo);

}  // namespace sslkit::eval

#endif  // SSLKIT_EVAL_REPORT_HPP_
