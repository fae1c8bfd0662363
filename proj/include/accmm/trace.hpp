#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace accmm {

// One iteration record. Reals are written with 17 significant digits so the
// CSV round-trips losslessly; absent values become empty fields. elapsed_ms
// is kept at 0: traces must be byte-identical across repeated runs, which a
// wall-clock column would break (run timing is reported on stderr instead).
struct TraceRow {
  int iter = 0;
  std::uint64_t fq = 0;
  std::uint64_t gq = 0;
  std::optional<double> objective;
  std::optional<double> metric;
  double eta = 0.0;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::int64_t elapsed_ms = 0;
};

inline constexpr const char* kTraceHeader = "iter,fq,gq,objective,metric,eta,alpha,beta,elapsed_ms";

std::string format_real(double v);  // %.17g

std::string trace_to_csv(const std::vector<TraceRow>& rows);
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);
std::vector<TraceRow> parse_trace_csv(const std::string& path);

}  // namespace accmm
