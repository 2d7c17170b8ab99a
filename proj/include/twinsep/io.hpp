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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "twinsep/sieve.hpp"
#include "twinsep/spectrum.hpp"

namespace twinsep {

using Metadata = std::map<std::string, std::string>;

enum class CountSource { sieved, external };

// Table of (n, pi1, pi2[, pi1_adjusted]) checkpoints, sorted by n with no
// duplicates.
struct CountTable {
  std::vector<CountRecord> rows;
  CountSource source = CountSource::external;
  Metadata metadata;

  friend bool operator==(const CountTable&, const CountTable&) = default;
};

// Checks ordering, duplicates, monotone counts and per-record invariants.
// Messages name the offending row (1-based data row).
void validate(const CountTable& table);

// `# metadata: k=v,k=v` comment line; values must not contain ',' or '\n'.
std::string format_metadata(const Metadata& meta);
Metadata parse_metadata_line(const std::string& line);

// counts.csv: header `n,pi1,pi2,pi1_adjusted` (last column optional, empty
// when absent). Lines beginning with '#' are comments; a `# metadata:` line
// is parsed into CountTable::metadata.
CountTable read_counts_csv(std::istream& in);
CountTable ingest_counts(const std::filesystem::path& path);
void write_counts_csv(std::ostream& out, const CountTable& table);
void write_counts_csv(const std::filesystem::path& path, const CountTable& table);

// seps.bin: little-endian uint32 values, no header.
void write_separations_bin(const std::filesystem::path& path,
                           std::span<const std::uint32_t> separations);
std::vector<std::uint32_t> read_separations_bin(const std::filesystem::path& path);

// spectrum.csv: header `s,count`, ascending s.
void write_spectrum_csv(std::ostream& out, const SeparationSpectrum& spectrum,
                        const Metadata& meta = {});
void write_spectrum_csv(const std::filesystem::path& path, const SeparationSpectrum& spectrum,
                        const Metadata& meta = {});
SeparationSpectrum read_spectrum_csv(std::istream& in);
SeparationSpectrum read_spectrum_csv(const std::filesystem::path& path);

// onsets.csv: header `separation,n`.
void write_onsets_csv(const std::filesystem::path& path, std::span<const Onset> onsets,
                      const Metadata& meta = {});
std::vector<Onset> read_onsets_csv(const std::filesystem::path& path);

// Generic numeric CSV: header row of column names, '#' comments skipped.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Metadata metadata;

  // Index of `name`, or -1.
  int column(const std::string& name) const;
};

CsvTable read_numeric_csv(const std::filesystem::path& path);

}  // namespace twinsep
