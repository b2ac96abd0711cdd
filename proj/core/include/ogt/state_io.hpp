#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ogt/algorithms.hpp"

namespace ogt {

using NamedMatrix = std::pair<std::string, Matrix>;

/// Checkpoint text: a line `k <iteration>`, then per matrix a header
/// `[name] rows cols` followed by `rows` lines of space-separated weights
/// written with 17 significant digits.
void write_sections(std::ostream& out, long k, const std::vector<NamedMatrix>& sections);

/// Inverse of write_sections. Throws ParseError naming `source` and the line.
std::vector<NamedMatrix> read_sections(std::istream& in, const std::string& source, long& k);

void write_state(std::ostream& out, const GtState& state);
void write_state(std::ostream& out, const AccGtState& state);
void write_state(std::ostream& out, const SsgtState& state);
void write_state(std::ostream& out, const OgtState& state);

/// Read a state of the requested type; section names and order must match
/// what write_state emits.
template <class State>
State read_state(std::istream& in, const std::string& source);

template <> GtState read_state<GtState>(std::istream& in, const std::string& source);
template <> AccGtState read_state<AccGtState>(std::istream& in, const std::string& source);
template <> SsgtState read_state<SsgtState>(std::istream& in, const std::string& source);
template <> OgtState read_state<OgtState>(std::istream& in, const std::string& source);

}  // namespace ogt
