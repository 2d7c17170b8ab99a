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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "twinsep/error.hpp"
#include "twinsep/io.hpp"

using namespace twinsep;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "twinsep_test_io";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string error_text(auto&& fn, ErrorKind want) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == want);
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

}  // namespace

TEST_CASE("ingest external counts") {
  const auto p = scratch("two_rows.csv");
  write_text(p, "n,pi1,pi2\n10,4,2\n100,25,8\n");
  const CountTable t = ingest_counts(p);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == CountRecord{10, 4, 2, std::nullopt});
  CHECK(t.rows[1] == CountRecord{100, 25, 8, std::nullopt});
  CHECK(t.source == CountSource::external);
}

TEST_CASE("rejected tables name the row") {
  const auto p = scratch("bad.csv");
  write_text(p, "n,pi1,pi2\n100,25,8\n10,4,2\n");
  CHECK(error_text([&] { ingest_counts(p); }, ErrorKind::invalid_input).find("row 2") !=
        std::string::npos);

  write_text(p, "n,pi1,pi2\n10,4,2\n10,4,2\n");
  CHECK(error_text([&] { ingest_counts(p); }, ErrorKind::invalid_input).find("duplicate") !=
        std::string::npos);

  write_text(p, "n,pi1,pi2\n10,4,2\n100,3,2\n");
  CHECK(error_text([&] { ingest_counts(p); }, ErrorKind::invalid_input).find("monotonicity") !=
        std::string::npos);

  write_text(p, "n,pi1\n10,4\n");
  CHECK(error_text([&] { ingest_counts(p); }, ErrorKind::invalid_input).find("header") !=
        std::string::npos);

  write_text(p, "n,pi1,pi2\n10,4\n");
  CHECK(error_text([&] { ingest_counts(p); }, ErrorKind::invalid_input).find("line 2") !=
        std::string::npos);

  write_text(p, "n,pi1,pi2\n10,four,2\n");
  error_text([&] { ingest_counts(p); }, ErrorKind::invalid_input);

  write_text(p, "n,pi1,pi2\n100,10,8\n");
  CHECK(error_text([&] { ingest_counts(p); }, ErrorKind::invalid_input).find("pi2") !=
        std::string::npos);

  error_text([] { ingest_counts(scratch("missing_file.csv")); }, ErrorKind::io);
}

TEST_CASE("metadata lines") {
  const Metadata m{{"limit", "1000"}, {"segment_size", "65536"}};
  const std::string line = format_metadata(m);
  CHECK(line == "# metadata: limit=1000,segment_size=65536");
  CHECK(parse_metadata_line(line) == m);
  CHECK(parse_metadata_line("# other comment").empty());
}

TEST_CASE("property: counts tables round-trip") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::uint64_t> step(1, 1000);
  for (int trial = 0; trial < 50; ++trial) {
    CountTable t;
    t.source = trial % 2 == 0 ? CountSource::sieved : CountSource::external;
    t.metadata["trial"] = std::to_string(trial);
    std::uint64_t n = 10, pi1 = 4, pi2 = 2;
    for (int i = 0; i < 1 + trial % 9; ++i) {
      std::optional<std::uint64_t> adj;
      if (trial % 3 != 0) adj = pi1 - 1;
      t.rows.push_back({n, pi1, pi2, adj});
      n += step(rng) * 10;
      const std::uint64_t d = step(rng) * 2;
      pi1 += d;
      pi2 += step(rng) % (d / 2 + 1);
    }
    std::stringstream ss;
    write_counts_csv(ss, t);
    CHECK(read_counts_csv(ss) == t);
  }
}

TEST_CASE("separations and spectra files") {
  const std::vector<std::uint32_t> seps{0, 0, 1, 1, 2, 1, 70000, 4294967295u};
  const auto bin = scratch("seps.bin");
  write_separations_bin(bin, seps);
  CHECK(fs::file_size(bin) == 4 * seps.size());
  CHECK(read_separations_bin(bin) == seps);

  write_text(bin, "abc");
  error_text([&] { read_separations_bin(bin); }, ErrorKind::invalid_input);

  const auto csv = scratch("spectrum.csv");
  const auto sp = accumulate(std::span(seps).first(6));
  write_spectrum_csv(csv, sp, {{"limit", "100"}});
  CHECK(read_spectrum_csv(csv) == sp);

  write_text(csv, "s,n\n0,1\n");
  error_text([&] { read_spectrum_csv(csv); }, ErrorKind::invalid_input);

  const auto ons = scratch("onsets.csv");
  const std::vector<Onset> onsets{{0, 11}, {1, 29}, {2, 59}};
  write_onsets_csv(ons, onsets);
  const auto back = read_onsets_csv(ons);
  REQUIRE(back.size() == 3);
  CHECK(back[2].separation == 2);
  CHECK(back[2].n == 59);
}

TEST_CASE("numeric csv") {
  const auto p = scratch("numeric.csv");
  write_text(p, "# metadata: kind=test\npi1,value\n100, 1.5\n1000,\n");
  const CsvTable t = read_numeric_csv(p);
  CHECK(t.column("value") == 1);
  CHECK(t.column("absent") == -1);
  CHECK(t.metadata.at("kind") == "test");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == 1.5);
  CHECK(std::isnan(t.rows[1][1]));
}
