#include "ogt/state_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "ogt/errors.hpp"

namespace ogt {

void write_sections(std::ostream& out, long k, const std::vector<NamedMatrix>& sections) {
  const auto old = out.precision(17);
  out << "k " << k << '\n';
  for (const auto& [name, m] : sections) {
    out << '[' << name << "] " << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ' ';
        out << m(i, j);
      }
      out << '\n';
    }
  }
  out.precision(old);
}

std::vector<NamedMatrix> read_sections(std::istream& in, const std::string& source, long& k) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(source, 0, "empty state file");
  {
    std::istringstream ls(line);
    std::string tag, extra;
    if (!(ls >> tag >> k) || tag != "k" || (ls >> extra)) throw ParseError(source, line_no, "expected 'k <iteration>'");
  }
  std::vector<NamedMatrix> sections;
  while (next_line()) {
    std::istringstream ls(line);
    std::string name, extra;
    long rows = 0, cols = 0;
    if (!(ls >> name >> rows >> cols) || (ls >> extra) || name.size() < 3 || name.front() != '[' ||
        name.back() != ']' || rows < 0 || cols < 0)
      throw ParseError(source, line_no, "expected '[name] rows cols'");
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i) {
      if (!next_line()) throw ParseError(source, line_no, "section " + name + " is truncated");
      std::istringstream row(line);
      for (long j = 0; j < cols; ++j) {
        if (!(row >> m(i, j))) throw ParseError(source, line_no, "expected " + std::to_string(cols) + " values");
      }
      if (row >> extra) throw ParseError(source, line_no, "too many values");
    }
    sections.emplace_back(name.substr(1, name.size() - 2), std::move(m));
  }
  return sections;
}

namespace {

template <std::size_t N>
std::vector<NamedMatrix> expect(std::istream& in, const std::string& source, long& k,
                                const char* const (&names)[N]) {
  auto sections = read_sections(in, source, k);
  if (sections.size() != N) throw ParseError(source, 0, "expected " + std::to_string(N) + " sections");
  for (std::size_t i = 0; i < N; ++i) {
    if (sections[i].first != names[i])
      throw ParseError(source, 0, "expected section '" + std::string(names[i]) + "', got '" + sections[i].first + "'");
  }
  return sections;
}

}  // namespace

void write_state(std::ostream& out, const GtState& s) {
  write_sections(out, s.k, {{"x", s.x}, {"s", s.s}, {"grad_x", s.grad_x}});
}

void write_state(std::ostream& out, const AccGtState& s) {
  write_sections(out, s.k, {{"x", s.x}, {"y", s.y}, {"z", s.z}, {"s", s.s}, {"grad_x", s.grad_x}});
}

void write_state(std::ostream& out, const SsgtState& s) {
  write_sections(out, s.k,
                 {{"x", s.x}, {"y", s.y}, {"z", s.z}, {"u", s.u}, {"q", s.q}, {"m", s.m}, {"g", s.g}});
}

void write_state(std::ostream& out, const OgtState& s) {
  write_sections(out, s.k,
                 {{"x", s.x}, {"y", s.y}, {"q", s.q}, {"m", s.m}, {"zt", s.zt}, {"ut", s.ut}, {"gt", s.gt}});
}

template <>
GtState read_state<GtState>(std::istream& in, const std::string& source) {
  GtState s;
  auto v = expect(in, source, s.k, {"x", "s", "grad_x"});
  s.x = v[0].second;
  s.s = v[1].second;
  s.grad_x = v[2].second;
  return s;
}

template <>
AccGtState read_state<AccGtState>(std::istream& in, const std::string& source) {
  AccGtState s;
  auto v = expect(in, source, s.k, {"x", "y", "z", "s", "grad_x"});
  s.x = v[0].second;
  s.y = v[1].second;
  s.z = v[2].second;
  s.s = v[3].second;
  s.grad_x = v[4].second;
  return s;
}

template <>
SsgtState read_state<SsgtState>(std::istream& in, const std::string& source) {
  SsgtState s;
  auto v = expect(in, source, s.k, {"x", "y", "z", "u", "q", "m", "g"});
  s.x = v[0].second;
  s.y = v[1].second;
  s.z = v[2].second;
  s.u = v[3].second;
  s.q = v[4].second;
  s.m = v[5].second;
  s.g = v[6].second;
  return s;
}

template <>
OgtState read_state<OgtState>(std::istream& in, const std::string& source) {
  OgtState s;
  auto v = expect(in, source, s.k, {"x", "y", "q", "m", "zt", "ut", "gt"});
  s.x = v[0].second;
  s.y = v[1].second;
  s.q = v[2].second;
  s.m = v[3].second;
  s.zt = v[4].second;
  s.ut = v[5].second;
  s.gt = v[6].second;
  return s;
}

}  // namespace ogt
