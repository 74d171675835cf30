// Copyright 2026 The catqubit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "config.hpp"
#include "output.hpp"
#include "worker_pool.hpp"

namespace catsim {
namespace {

namespace fs = std::filesystem;

const std::vector<KeySpec> kSchema{
    {"experiment", "id", Kind::kString, std::string("x")},
    {"physics", "n_bar", Kind::kReal, 4.0},
    {"physics", "photons", Kind::kInt, std::int64_t{2}},
    {"physics", "alphas", Kind::kRealList, std::vector<double>{}},
    {"numerics", "sectors", Kind::kBool, true},
};

TEST(Config, ParsesTheSubset) {
  const Config c = Config::parse(R"(# comment
[experiment]
id = "run \"a\""   # trailing
[physics]
n_bar = 9
photons = 4
alphas = [0.5, 1.0, 1_0.5]
[numerics]
sectors = false
)");
  Config r = c;
  r.resolve(kSchema);
  EXPECT_EQ(r.string("experiment", "id"), "run \"a\"");
  EXPECT_DOUBLE_EQ(r.real("physics", "n_bar"), 9.0);
  EXPECT_EQ(r.integer("physics", "photons"), 4);
  EXPECT_EQ(r.reals("physics", "alphas"), (std::vector<double>{0.5, 1.0, 10.5}));
  EXPECT_FALSE(r.boolean("numerics", "sectors"));
}

TEST(Config, DefaultsAndOverrides) {
  Config c = Config::parse("[physics]\nalphas = \"0.2:1.0:0.2\"\n");
  c.set("physics.n_bar=2.5");
  c.resolve(kSchema);
  EXPECT_DOUBLE_EQ(c.real("physics", "n_bar"), 2.5);
  EXPECT_EQ(c.integer("physics", "photons"), 2);
  const auto& a = c.reals("physics", "alphas");
  ASSERT_EQ(a.size(), 5u);
  EXPECT_DOUBLE_EQ(a.back(), 1.0);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(Config::parse("key = 1\n"), ConfigError);
  EXPECT_THROW(Config::parse("[a]\nk = 1\nk = 2\n"), ConfigError);
  EXPECT_THROW(Config::parse("[a]\n[a]\n"), ConfigError);
  EXPECT_THROW(Config::parse("[a]\nk = \"open\n"), ConfigError);
  EXPECT_THROW(Config::parse("[a]\nk = 1.2.3\n"), ConfigError);
  Config unknown = Config::parse("[physics]\nbogus = 1\n");
  EXPECT_THROW(unknown.resolve(kSchema), ConfigError);
  Config wrong = Config::parse("[physics]\nphotons = \"two\"\n");
  EXPECT_THROW(wrong.resolve(kSchema), ConfigError);
  Config c;
  EXPECT_THROW(c.set("no_dot=1"), ConfigError);
  EXPECT_THROW(Config::load("/nonexistent/preset.toml"), ConfigError);
}

TEST(Config, RangeExpansion) {
  EXPECT_EQ(parse_range("1,2.5,4"), (std::vector<double>{1.0, 2.5, 4.0}));
  const auto r = parse_range("0.2:3.0:0.1");
  ASSERT_EQ(r.size(), 29u);
  EXPECT_DOUBLE_EQ(r[10], 0.2 + 10 * 0.1);
  EXPECT_THROW(parse_range("1:0:0.1"), ConfigError);
  EXPECT_THROW(parse_range("0:1:0"), ConfigError);
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(123456789012.0), "1.23456789e+11");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-1.0 / 0.0), "-inf");
}

TEST(Output, CsvAndChecksum) {
  const fs::path dir = fs::temp_directory_path() / "catsim_output_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  CsvTable t;
  t.columns = {"a", "b"};
  t.add({1.0, std::string("ok")});
  t.add({0.5, std::string("x")});
  EXPECT_THROW(t.add({1.0}), std::logic_error);
  const OutputRecord rec = write_csv(dir, "t.csv", t);
  std::ifstream in(dir / "t.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "a,b\n1,ok\n0.5,x\n");
  EXPECT_EQ(rec.rows, 2u);
  EXPECT_EQ(rec.path, "t.csv");

  write_atomically(dir / "abc.txt", "abc");
  EXPECT_EQ(sha256_file(dir / "abc.txt"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(rec.sha256, sha256_file(dir / "t.csv"));

  EXPECT_EQ(unique_stem(dir, "run"), "run");
  write_atomically(dir / "run.csv", "");
  EXPECT_EQ(unique_stem(dir, "run"), "run-1");
  fs::remove_all(dir);
}

TEST(Output, TimestampShape) {
  const std::string s = utc_timestamp();
  ASSERT_EQ(s.size(), 16u);
  EXPECT_EQ(s[8], 'T');
  EXPECT_EQ(s.back(), 'Z');
}

TEST(WorkerPool, ResultsIndependentOfJobsAndErrorsPropagate) {
  std::vector<int> a(100), b(100);
  parallel_for(100, 1, [&](std::size_t i) { a[i] = static_cast<int>(i * i); });
  parallel_for(100, 4, [&](std::size_t i) { b[i] = static_cast<int>(i * i); });
  EXPECT_EQ(a, b);
  try {
    parallel_for(10, 3, [](std::size_t i) {
      if (i == 7 || i == 4) throw std::runtime_error(std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "4");
  }
}

}  // namespace
}  // namespace catsim
