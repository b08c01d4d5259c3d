#include <charconv>
#include <cstdio>

#include "wavedecay/cli.hpp"

namespace wavedecay::cli {

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_17g(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const EnergyTrace& trace) {
  out << "t,energy_total,energy_grad,energy_v\n";
  for (const auto& s : trace.samples) {
    out << format_17g(s.t) << ',' << format_17g(s.total) << ',' << format_17g(s.grad) << ','
        << format_17g(s.v) << '\n';
  }
}

}  // namespace wavedecay::cli
