#pragma once

// Serialization of experiment results, audits and configurations.
//
// Floats are written with 12 significant digits, objects keep a fixed field order, and
// nothing that depends on scheduling (thread count, output path) is written, so equal
// inputs give byte-identical documents. CSV uses a header row, commas and LF endings.

#include <string>

#include "mnlb/audit.hpp"
#include "mnlb/experiment.hpp"

namespace mnlb {

/// "%.12g"
std::string format_real(double value);

std::string emit_report(const ExperimentResult& result, ReportFormat format);
std::string emit_report(const AuditReport& report, ReportFormat format);
std::string emit_report(const ScalingFit& fit, const ExperimentConfig& base, ReportFormat format);
std::string emit_report(const Trajectory& trajectory, ReportFormat format);

/// Inverse of emit_report(result, json), up to the 12-digit rounding of floats.
ExperimentResult parse_experiment_json(const std::string& text);

/// Applies the keys of a JSON config document on top of `base`. Unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});
std::string config_to_json(const ExperimentConfig& config);

std::string read_text_file(const std::string& path);
/// Throws io when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mnlb
