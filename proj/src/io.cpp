// Copyright 2026 The twinsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twinsep/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include "twinsep/error.hpp"

namespace twinsep {
namespace {

constexpr const char* kMetadataPrefix = "# metadata:";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_u64(const std::string& text, std::size_t line_no, const char* column) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    fail(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": bad " + column +
                                       " value '" + t + "'");
  }
  return v;
}

double parse_double(const std::string& text, std::size_t line_no) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used == t.size()) return v;
  } catch (const std::logic_error&) {
  }
  fail(ErrorKind::invalid_input,
       "line " + std::to_string(line_no) + ": bad number '" + t + "'");
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void check_written(const std::ostream& out, const std::filesystem::path& path) {
  if (!out) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

// Reads the next non-comment line, collecting metadata comments on the way.
bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no, Metadata* meta) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      if (meta != nullptr && line.rfind(kMetadataPrefix, 0) == 0) {
        const Metadata m = parse_metadata_line(line);
        meta->insert(m.begin(), m.end());
      }
      continue;
    }
    return true;
  }
  return false;
}

}  // namespace

std::string format_metadata(const Metadata& meta) {
  std::string out = kMetadataPrefix;
  bool first = true;
  for (const auto& [k, v] : meta) {
    out += first ? " " : ",";
    out += k + "=" + v;
    first = false;
  }
  return out;
}

Metadata parse_metadata_line(const std::string& line) {
  Metadata meta;
  if (line.rfind(kMetadataPrefix, 0) != 0) return meta;
  for (const std::string& item : split(line.substr(std::string(kMetadataPrefix).size()), ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    meta[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return meta;
}

void validate(const CountTable& table) {
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const CountRecord& r = table.rows[i];
    const std::string where = "row " + std::to_string(i + 1) + " (n=" + std::to_string(r.n) + ")";
    if (r.pi2 >= 2 && 2 * r.pi2 - 1 > r.pi1) {
      fail(ErrorKind::invalid_input, where + ": pi2 too large for pi1");
    }
    if (r.pi1_adjusted && *r.pi1_adjusted > r.pi1) {
      fail(ErrorKind::invalid_input, where + ": pi1_adjusted exceeds pi1");
    }
    if (i == 0) continue;
    const CountRecord& prev = table.rows[i - 1];
    if (r.n == prev.n) fail(ErrorKind::invalid_input, where + ": duplicate n");
    if (r.n < prev.n) fail(ErrorKind::invalid_input, where + ": n is out of order");
    if (r.pi1 < prev.pi1 || r.pi2 < prev.pi2) {
      fail(ErrorKind::invalid_input, where + ": counts decrease (monotonicity violation)");
    }
  }
}

CountTable read_counts_csv(std::istream& in) {
  CountTable table;
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no, &table.metadata)) {
    fail(ErrorKind::invalid_input, "counts file is empty");
  }
  std::vector<std::string> header = split(line, ',');
  for (auto& h : header) h = trim(h);
  const bool has_adjusted = header.size() == 4 && header[3] == "pi1_adjusted";
  if (header.size() < 3 || header[0] != "n" || header[1] != "pi1" || header[2] != "pi2" ||
      (header.size() == 4 && !has_adjusted) || header.size() > 4) {
    fail(ErrorKind::invalid_input,
         "line " + std::to_string(line_no) + ": expected header n,pi1,pi2[,pi1_adjusted]");
  }
  while (next_data_line(in, line, line_no, &table.metadata)) {
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != header.size()) {
      fail(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(header.size()) + " columns, got " +
                                         std::to_string(cells.size()));
    }
    CountRecord r;
    r.n = parse_u64(cells[0], line_no, "n");
    r.pi1 = parse_u64(cells[1], line_no, "pi1");
    r.pi2 = parse_u64(cells[2], line_no, "pi2");
    if (has_adjusted && !trim(cells[3]).empty()) {
      r.pi1_adjusted = parse_u64(cells[3], line_no, "pi1_adjusted");
    }
    table.rows.push_back(r);
  }
  if (const auto src = table.metadata.find("source"); src != table.metadata.end()) {
    table.source = src->second == "sieved" ? CountSource::sieved : CountSource::external;
    table.metadata.erase(src);
  }
  validate(table);
  return table;
}

CountTable ingest_counts(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_counts_csv(in);
}

void write_counts_csv(std::ostream& out, const CountTable& table) {
  Metadata meta = table.metadata;
  meta["source"] = table.source == CountSource::sieved ? "sieved" : "external";
  out << format_metadata(meta) << '\n';
  out << "n,pi1,pi2,pi1_adjusted\n";
  for (const CountRecord& r : table.rows) {
    out << r.n << ',' << r.pi1 << ',' << r.pi2 << ',';
    if (r.pi1_adjusted) out << *r.pi1_adjusted;
    out << '\n';
  }
}

void write_counts_csv(const std::filesystem::path& path, const CountTable& table) {
  auto out = open_out(path);
  write_counts_csv(out, table);
  check_written(out, path);
}

void write_separations_bin(const std::filesystem::path& path,
                           std::span<const std::uint32_t> separations) {
  auto out = open_out(path, std::ios::binary);
  std::vector<unsigned char> buf;
  buf.reserve(separations.size() * 4);
  for (std::uint32_t v : separations) {
    for (int b = 0; b < 4; ++b) buf.push_back(static_cast<unsigned char>(v >> (8 * b)));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  check_written(out, path);
}

std::vector<std::uint32_t> read_separations_bin(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  if (buf.size() % 4 != 0) {
    fail(ErrorKind::invalid_input,
         "'" + path.string() + "' length is not a multiple of 4 bytes");
  }
  std::vector<std::uint32_t> out(buf.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::uint32_t{buf[4 * i]} | std::uint32_t{buf[4 * i + 1]} << 8 |
             std::uint32_t{buf[4 * i + 2]} << 16 | std::uint32_t{buf[4 * i + 3]} << 24;
  }
  return out;
}

void write_spectrum_csv(std::ostream& out, const SeparationSpectrum& spectrum,
                        const Metadata& meta) {
  if (!meta.empty()) out << format_metadata(meta) << '\n';
  out << "s,count\n";
  for (const auto& [s, c] : spectrum.bins()) out << s << ',' << c << '\n';
}

void write_spectrum_csv(const std::filesystem::path& path, const SeparationSpectrum& spectrum,
                        const Metadata& meta) {
  auto out = open_out(path);
  write_spectrum_csv(out, spectrum, meta);
  check_written(out, path);
}

SeparationSpectrum read_spectrum_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no, nullptr) || trim(line) != "s,count") {
    fail(ErrorKind::invalid_input, "spectrum file must start with header s,count");
  }
  SeparationSpectrum spectrum;
  while (next_data_line(in, line, line_no, nullptr)) {
    const auto cells = split(line, ',');
    if (cells.size() != 2) {
      fail(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": expected s,count");
    }
    const std::uint64_t s = parse_u64(cells[0], line_no, "s");
    if (s > std::numeric_limits<std::uint32_t>::max()) {
      fail(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": separation too large");
    }
    spectrum.add(static_cast<std::uint32_t>(s), parse_u64(cells[1], line_no, "count"));
  }
  return spectrum;
}

SeparationSpectrum read_spectrum_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_spectrum_csv(in);
}

void write_onsets_csv(const std::filesystem::path& path, std::span<const Onset> onsets,
                      const Metadata& meta) {
  auto out = open_out(path);
  if (!meta.empty()) out << format_metadata(meta) << '\n';
  out << "separation,n\n";
  for (const Onset& o : onsets) out << o.separation << ',' << o.n << '\n';
  check_written(out, path);
}

std::vector<Onset> read_onsets_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no, nullptr) || trim(line) != "separation,n") {
    fail(ErrorKind::invalid_input, "onsets file must start with header separation,n");
  }
  std::vector<Onset> out;
  while (next_data_line(in, line, line_no, nullptr)) {
    const auto cells = split(line, ',');
    if (cells.size() != 2) {
      fail(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": expected separation,n");
    }
    out.push_back({static_cast<std::uint32_t>(parse_u64(cells[0], line_no, "separation")),
                   parse_u64(cells[1], line_no, "n")});
  }
  return out;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_numeric_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no, &table.metadata)) {
    fail(ErrorKind::invalid_input, "'" + path.string() + "' is empty");
  }
  for (const auto& c : split(line, ',')) table.columns.push_back(trim(c));
  while (next_data_line(in, line, line_no, &table.metadata)) {
    const auto cells = split(line, ',');
    if (cells.size() != table.columns.size()) {
      fail(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": column count mismatch");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(trim(c).empty() ? std::nan("") : parse_double(c, line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace twinsep
