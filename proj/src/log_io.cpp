#include "formsim/log_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace formsim {

namespace {

void append_double(std::string& out, double v) {
  std::array<char, 32> buf;
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  out.append(buf.data(), static_cast<std::size_t>(len));
}

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw IoError("state csv line " + std::to_string(line) +
                  ": bad number '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

void write_state_csv(const SimLog& log, std::ostream& os,
                     std::size_t decimate) {
  if (decimate == 0) decimate = 1;
  std::string line;
  line.reserve(512);
  os << k_state_csv_header << '\n';
  for (std::size_t k = 0; k < log.record_count(); ++k) {
    if (k % decimate != 0) continue;
    for (std::size_t i = 0; i < log.vehicle_count(); ++i) {
      const VehicleStep& r = log.at(k, i);
      line.clear();
      append_double(line, log.times[k]);
      line += ',';
      line += std::to_string(i + 1);
      for (double v :
           {r.truth.position.x, r.truth.position.y, r.truth.velocity.x,
            r.truth.velocity.y, r.observer.position_estimate.x,
            r.observer.position_estimate.y, r.observer.velocity_estimate.x,
            r.observer.velocity_estimate.y, r.ref_position.x,
            r.ref_position.y, r.position_error.x, r.position_error.y,
            r.velocity_error.x, r.velocity_error.y, r.continuous_control.x,
            r.continuous_control.y, r.held_control.x, r.held_control.y}) {
        line += ',';
        append_double(line, v);
      }
      line += ',';
      line += r.triggered ? '1' : '0';
      line += ',';
      line += std::to_string(static_cast<int>(r.branch));
      line += ',';
      append_double(line, r.weight_norm);
      line += ',';
      append_double(line, r.bound_norm);
      line += '\n';
      os << line;
    }
  }
}

void write_state_csv(const SimLog& log, const std::filesystem::path& path,
                     std::size_t decimate) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_state_csv(log, os, decimate);
  if (!os) throw IoError("failed writing " + path.string());
}

SimLog read_state_csv(std::istream& is, SimConfig config) {
  constexpr std::size_t k_columns = 24;

  std::string header;
  if (!std::getline(is, header)) throw IoError("state csv: empty file");
  if (header != k_state_csv_header) {
    throw IoError("state csv: unrecognized header");
  }

  SimLog log;
  std::vector<std::size_t> vehicle_ids;
  std::string row;
  std::size_t line_no = 1;
  std::vector<std::string_view> fields;
  fields.reserve(k_columns);

  while (std::getline(is, row)) {
    ++line_no;
    if (row.empty()) continue;
    fields.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      if (comma == std::string::npos) {
        fields.emplace_back(row.data() + start, row.size() - start);
        break;
      }
      fields.emplace_back(row.data() + start, comma - start);
      start = comma + 1;
    }
    if (fields.size() != k_columns) {
      throw IoError("state csv line " + std::to_string(line_no) +
                    ": expected " + std::to_string(k_columns) + " columns");
    }
    const double t = parse_double(fields[0], line_no);
    const std::size_t vehicle =
        static_cast<std::size_t>(parse_double(fields[1], line_no));
    if (vehicle == 0) {
      throw IoError("state csv line " + std::to_string(line_no) +
                    ": vehicle ids are 1-based");
    }
    VehicleStep rec;
    rec.truth.position = {parse_double(fields[2], line_no),
                          parse_double(fields[3], line_no)};
    rec.truth.velocity = {parse_double(fields[4], line_no),
                          parse_double(fields[5], line_no)};
    rec.observer.position_estimate = {parse_double(fields[6], line_no),
                                      parse_double(fields[7], line_no)};
    rec.observer.velocity_estimate = {parse_double(fields[8], line_no),
                                      parse_double(fields[9], line_no)};
    rec.observer.latest_sample = rec.observer.position_estimate;
    rec.ref_position = {parse_double(fields[10], line_no),
                        parse_double(fields[11], line_no)};
    rec.position_error = {parse_double(fields[12], line_no),
                          parse_double(fields[13], line_no)};
    rec.velocity_error = {parse_double(fields[14], line_no),
                          parse_double(fields[15], line_no)};
    rec.continuous_control = {parse_double(fields[16], line_no),
                              parse_double(fields[17], line_no)};
    rec.held_control = {parse_double(fields[18], line_no),
                        parse_double(fields[19], line_no)};
    rec.candidate_control = rec.held_control;
    rec.triggered = fields[20] == "1";
    rec.branch =
        static_cast<TriggerBranch>(parse_double(fields[21], line_no));
    rec.weight_norm = parse_double(fields[22], line_no);
    rec.bound_norm = parse_double(fields[23], line_no);

    if (vehicle == 1) log.times.push_back(t);
    vehicle_ids.push_back(vehicle);
    log.records.push_back(rec);
  }
  if (log.records.empty()) throw IoError("state csv: no data rows");

  const std::size_t n = log.records.size() / log.times.size();
  if (log.records.size() != n * log.times.size()) {
    throw IoError("state csv: ragged rows (incomplete step block)");
  }
  for (std::size_t k = 0; k < log.times.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (vehicle_ids[k * n + i] != i + 1) {
        throw IoError(
            "state csv: rows must be grouped per step, vehicles ascending");
      }
    }
  }

  config.vehicle_count = n;
  log.config = std::move(config);
  log.event_times.resize(n);
  log.event_branches.resize(n);
  for (std::size_t k = 0; k < log.times.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const VehicleStep& rec = log.at(k, i);
      if (rec.triggered) {
        log.event_times[i].push_back(log.times[k]);
        log.event_branches[i].push_back(rec.branch);
      }
    }
  }
  return log;
}

SimLog read_state_csv(const std::filesystem::path& path, SimConfig config) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_state_csv(is, std::move(config));
}

}  // namespace formsim
