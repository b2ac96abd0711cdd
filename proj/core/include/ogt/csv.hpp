#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ogt/harness.hpp"

namespace ogt {

inline constexpr const char* kCsvHeader = "k,vectors_sent,grad_evals,loss_gap,consensus_X,consensus_Q";

/// Header line, then one row per record with 17 significant digits.
void write_csv(std::ostream& out, const std::vector<IterationRecord>& records);
void emit_csv(const RunResult& result, const std::string& path);

/// Inverse of write_csv. Throws ParseError naming `source` and the line.
std::vector<IterationRecord> read_csv(std::istream& in, const std::string& source);
std::vector<IterationRecord> load_csv(const std::string& path);

/// JSON summary of a run: config echo, resolved parameters, spectral and
/// smoothness constants, termination and diagnostics.
std::string summary_json(const RunResult& result);

}  // namespace ogt
