#include "io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pointkg::cli {

namespace {

const char* const kTraceHeader = "t,re_z,im_z,abs_z,energy,charge";
const char* const kSnapshotHeader = "x,re_psi,im_psi,re_pi,im_pi";
const char* const kSpectrumHeader = "omega,re_amp,im_amp,abs_amp";

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path, const std::string& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw FormatError(path + ": expected header '" + header + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

double parse_number(const std::string& cell, const std::string& path, std::size_t row) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw FormatError(path + ": row " + std::to_string(row + 2) + ": bad number '" + cell + "'");
  }
  return v;
}

void expect_columns(const std::vector<std::string>& cells, std::size_t n, const std::string& path, std::size_t row) {
  if (cells.size() != n) {
    throw FormatError(path + ": row " + std::to_string(row + 2) + ": expected " + std::to_string(n) + " columns");
  }
}

// Uniform step of an ascending column, checked to 1e-9 relative.
double uniform_step(const std::vector<double>& v, const std::string& path) {
  if (v.size() < 2) throw FormatError(path + ": need at least two rows");
  const double step = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double expect = v.front() + step * static_cast<double>(i);
    if (std::abs(v[i] - expect) > 1e-9 * std::max(std::abs(step), std::abs(expect))) {
      throw FormatError(path + ": first column is not uniformly spaced");
    }
  }
  if (!(step > 0.0)) throw FormatError(path + ": first column must increase");
  return step;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void write_trace_csv(const std::string& path, const TraceSeries& trace, const std::vector<TimeSample>& energy,
                     const std::vector<TimeSample>& charge) {
  auto out = open_out(path);
  out << kTraceHeader << '\n';
  auto sample_at = [&](const std::vector<TimeSample>& samples, std::size_t k) -> std::string {
    for (const auto& s : samples) {
      if (std::abs(s.t / trace.dt - static_cast<double>(k)) < 1e-6) return format_double(s.value);
    }
    return "";
  };
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const cdouble z = trace.z[k];
    out << format_double(trace.time(k)) << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << ','
        << format_double(std::abs(z)) << ',' << sample_at(energy, k) << ',' << sample_at(charge, k) << '\n';
  }
}

TraceFile read_trace_csv(const std::string& path) {
  const auto rows = read_rows(path, kTraceHeader);
  TraceFile file;
  std::vector<double> times;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    expect_columns(rows[r], 6, path, r);
    const double t = parse_number(rows[r][0], path, r);
    times.push_back(t);
    file.trace.z.emplace_back(parse_number(rows[r][1], path, r), parse_number(rows[r][2], path, r));
    if (!rows[r][4].empty()) file.energy.push_back({t, parse_number(rows[r][4], path, r)});
    if (!rows[r][5].empty()) file.charge.push_back({t, parse_number(rows[r][5], path, r)});
  }
  file.trace.dt = uniform_step(times, path);
  if (std::abs(times.front()) > 1e-12 * file.trace.dt) throw FormatError(path + ": trace must start at t = 0");
  return file;
}

void write_snapshot_csv(const std::string& path, const FieldState& state) {
  auto out = open_out(path);
  out << kSnapshotHeader << '\n';
  for (std::size_t i = 0; i < state.grid.size(); ++i) {
    out << format_double(state.grid.x(i)) << ',' << format_double(state.psi[i].real()) << ','
        << format_double(state.psi[i].imag()) << ',' << format_double(state.pi[i].real()) << ','
        << format_double(state.pi[i].imag()) << '\n';
  }
}

FieldState read_snapshot_csv(const std::string& path) {
  const auto rows = read_rows(path, kSnapshotHeader);
  std::vector<double> xs;
  std::vector<cdouble> psi;
  std::vector<cdouble> pi;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    expect_columns(rows[r], 5, path, r);
    xs.push_back(parse_number(rows[r][0], path, r));
    psi.emplace_back(parse_number(rows[r][1], path, r), parse_number(rows[r][2], path, r));
    pi.emplace_back(parse_number(rows[r][3], path, r), parse_number(rows[r][4], path, r));
  }
  const double h = uniform_step(xs, path);
  if (xs.size() % 2 == 0) throw FormatError(path + ": snapshot needs an odd number of nodes");
  const double extent = xs.back();
  if (std::abs(xs.front() + extent) > 1e-9 * extent) throw FormatError(path + ": snapshot grid must be centered");
  FieldState state{Grid(extent, xs.size())};
  if (std::abs(state.grid.spacing() - h) > 1e-9 * h) throw FormatError(path + ": inconsistent spacing");
  state.psi = std::move(psi);
  state.pi = std::move(pi);
  return state;
}

void write_spectrum_csv(const std::string& path, const SpectrumEstimate& spec) {
  auto out = open_out(path);
  out << kSpectrumHeader << '\n';
  for (std::size_t j = 0; j < spec.freqs.size(); ++j) {
    out << format_double(spec.freqs[j]) << ',' << format_double(spec.amps[j].real()) << ','
        << format_double(spec.amps[j].imag()) << ',' << format_double(std::abs(spec.amps[j])) << '\n';
  }
}

SpectrumEstimate read_spectrum_csv(const std::string& path) {
  const auto rows = read_rows(path, kSpectrumHeader);
  SpectrumEstimate spec;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    expect_columns(rows[r], 4, path, r);
    spec.freqs.push_back(parse_number(rows[r][0], path, r));
    spec.amps.emplace_back(parse_number(rows[r][1], path, r), parse_number(rows[r][2], path, r));
  }
  uniform_step(spec.freqs, path);
  return spec;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw FormatError(path + ": not valid JSON");
  return doc;
}

}  // namespace pointkg::cli
