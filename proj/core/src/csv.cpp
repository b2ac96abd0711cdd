#include "ogt/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ogt/errors.hpp"

namespace ogt {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.k << ',' << r.vectors_sent << ',' << r.grad_evals << ',' << fmt17(r.loss_gap) << ','
        << fmt17(r.consensus_x) << ',' << fmt17(r.consensus_q) << '\n';
  }
}

void emit_csv(const RunResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_csv(out, result.records);
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<IterationRecord> read_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ParseError(source, line_no, "unexpected header '" + line + "'");

  std::vector<IterationRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw ParseError(source, line_no, "expected 6 columns");
    auto as_long = [&](const std::string& s) {
      char* end = nullptr;
      const long v = std::strtol(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0') throw ParseError(source, line_no, "bad integer '" + s + "'");
      return v;
    };
    auto as_double = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') throw ParseError(source, line_no, "bad number '" + s + "'");
      return v;
    };
    IterationRecord r;
    r.k = as_long(cells[0]);
    r.vectors_sent = as_long(cells[1]);
    r.grad_evals = as_long(cells[2]);
    r.loss_gap = as_double(cells[3]);
    r.consensus_x = as_double(cells[4]);
    r.consensus_q = as_double(cells[5]);
    records.push_back(r);
  }
  return records;
}

std::vector<IterationRecord> load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_csv(in, path);
}

std::string summary_json(const RunResult& r) {
  using nlohmann::json;
  json params;
  switch (r.config.algorithm) {
    case Algorithm::gt: params = {{"eta", r.params.gt.eta}, {"eta_rule", "delta/(4L)"}}; break;
    case Algorithm::accgt: params = {{"alpha", r.params.accgt.alpha}, {"beta", r.params.accgt.beta}}; break;
    case Algorithm::ssgt:
    case Algorithm::ogt: {
      const HyperParams& h = r.params.snapshot;
      params = {{"alpha", h.alpha}, {"beta", h.beta}, {"gamma", h.gamma}, {"tau", h.tau},
                {"eta", h.eta},     {"p", h.p},       {"q", h.q}};
      if (r.config.algorithm == Algorithm::ogt) params["eta_w"] = h.eta_w;
      break;
    }
  }
  json doc = {{"config", json::parse(r.config_json)},
              {"params", params},
              {"delta", r.delta},
              {"delta_tilde", r.delta_tilde},
              {"L", r.L},
              {"mu", r.mu},
              {"f_star", r.f_star},
              {"x_star_residual", r.x_star_residual},
              {"termination", to_string(r.termination)},
              {"iterations", r.iterations},
              {"grad_evals_total", r.grad_evals_total},
              {"gradient_iterations", r.gradient_iterations}};
  doc["target_iteration"] = r.target_iteration ? json(*r.target_iteration) : json(nullptr);
  if (r.diagnostics.checks > 0) {
    doc["diagnostics"] = {{"checks", r.diagnostics.checks},
                          {"average_dynamics", r.diagnostics.average_dynamics},
                          {"tracking", r.diagnostics.tracking},
                          {"snapshot_average", r.diagnostics.snapshot_average},
                          {"block_average", r.diagnostics.block_average},
                          {"cache", r.diagnostics.cache},
                          {"inexact_gradient_slack", r.diagnostics.inexact_gradient_slack}};
  }
  return doc.dump(2);
}

}  // namespace ogt
