#include "accmm/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "accmm/errors.hpp"

namespace accmm {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_opt(std::string& out, const std::optional<double>& v) {
  if (v.has_value()) out += format_real(*v);
}

std::optional<double> parse_opt(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return std::stod(cell);
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRow& r : rows) {
    out += std::to_string(r.iter);
    out += ',';
    out += std::to_string(r.fq);
    out += ',';
    out += std::to_string(r.gq);
    out += ',';
    append_opt(out, r.objective);
    out += ',';
    append_opt(out, r.metric);
    out += ',';
    out += format_real(r.eta);
    out += ',';
    append_opt(out, r.alpha);
    out += ',';
    append_opt(out, r.beta);
    out += ',';
    out += std::to_string(r.elapsed_ms);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("write_trace_csv: cannot open " + path);
  out << trace_to_csv(rows);
  if (!out) throw config_error("write_trace_csv: write failed for " + path);
}

std::vector<TraceRow> parse_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("parse_trace_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw config_error("parse_trace_csv: bad header in " + path);
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 9) throw config_error("parse_trace_csv: bad row in " + path);
    TraceRow r;
    r.iter = std::stoi(cells[0]);
    r.fq = std::stoull(cells[1]);
    r.gq = std::stoull(cells[2]);
    r.objective = parse_opt(cells[3]);
    r.metric = parse_opt(cells[4]);
    r.eta = std::stod(cells[5]);
    r.alpha = parse_opt(cells[6]);
    r.beta = parse_opt(cells[7]);
    r.elapsed_ms = std::stoll(cells[8]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace accmm
