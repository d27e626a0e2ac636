// Copyright 2026 The bitrev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "bitrev/bitstream.hpp"
#include "bitrev/database.hpp"
#include "bitrev/fabric.hpp"

namespace bitrev {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bitrev_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Exit status of the CLI with `args`; stdout goes to out.txt, stderr to err.txt.
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + BITREV_CLI + "\" " + args + " >\"" + path("out.txt") +
                            "\" 2>\"" + path("err.txt") + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out() const { return read_text_file(path("out.txt")); }
  std::string err() const { return read_text_file(path("err.txt")); }

  // Small fabric plus its reference bitstream.
  void small_fabric() const {
    ASSERT_EQ(run("fabric gen --output " + path("truth.json") + " --public " + path("fabric.json") +
                  " --width 6 --height 6 --pips 80 --budget 192 --defaults 0.02"),
              0)
        << err();
    ASSERT_EQ(run("bitgen --truth " + path("truth.json") + " --output " + path("ref.bit")), 0) << err();
  }

  fs::path dir_;
};

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("reverse --output x.db"), 2);
  EXPECT_EQ(run("--jobs 0 selfcheck"), 2);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_NE(out().find("reverse"), std::string::npos);
}

TEST_F(Cli, RuntimeErrorsExitOne) {
  EXPECT_EQ(run("bitgen --truth " + path("missing.json") + " --output " + path("x.bit")), 1);
  EXPECT_NE(err().find("error:"), std::string::npos);
  write_text_file(path("bad.db"), "not a database");
  small_fabric();
  EXPECT_EQ(run("convert --db " + path("bad.db") + " --reference " + path("ref.bit") + " --input " +
                path("ref.bit") + " --output " + path("n.xdl")),
            1);
}

TEST_F(Cli, Selfcheck) {
  EXPECT_EQ(run("selfcheck"), 0) << out();
  EXPECT_EQ(out().find("FAIL"), std::string::npos) << out();
}

TEST_F(Cli, ReverseConvertAndPatch) {
  small_fabric();
  ASSERT_EQ(run("reverse --truth " + path("truth.json") + " --fabric " + path("fabric.json") + " --output " +
                path("a.db")),
            0)
      << err();
  EXPECT_NE(out().find("196"), std::string::npos) << out();
  ASSERT_EQ(run("--jobs 3 reverse --truth " + path("truth.json") + " --output " + path("b.db")), 0) << err();
  EXPECT_EQ(read_text_file(path("a.db")), read_text_file(path("b.db")));

  const EncodingDatabase db = load_database(path("a.db"));
  const std::size_t tile = db.index_of({2, 2});
  std::uint32_t pip = 0;
  while (db.is_default(tile, pip)) ++pip;
  const auto& [src, sink] = db.type_of(tile).pip_names[pip];
  const std::string addr = "INT_X2Y2:" + src + "->" + sink;
  ASSERT_EQ(run("manip set-pip --db " + path("a.db") + " --input " + path("ref.bit") + " --output " +
                path("p.bit") + " \"" + addr + "\""),
            0)
      << err();
  EXPECT_EQ(diff_bitstreams(read_bitstream(path("ref.bit")), read_bitstream(path("p.bit"))), db.pip_bits(tile, pip));
  ASSERT_EQ(run("convert --db " + path("a.db") + " --reference " + path("ref.bit") + " --input " + path("p.bit") +
                " --output " + path("p.xdl")),
            0);
  EXPECT_NE(read_text_file(path("p.xdl")).find("pip INT_X2Y2 " + src + " -> " + sink), std::string::npos);
  ASSERT_EQ(run("manip unset-pip --db " + path("a.db") + " --input " + path("p.bit") + " --output " +
                path("q.bit") + " \"" + addr + "\""),
            0);
  EXPECT_EQ(read_bitstream(path("q.bit")), read_bitstream(path("ref.bit")));
  EXPECT_EQ(run("manip set-pip --db " + path("a.db") + " --input " + path("ref.bit") + " --output " +
                path("z.bit") + " INT_X2Y2:A->A"),
            1);

  ASSERT_EQ(run("fabric report --fabric " + path("fabric.json") + " INT_X2Y2"), 0);
  EXPECT_NE(out().find(src), std::string::npos);
}

TEST_F(Cli, ConfigFileSuppliesGlobals) {
  write_text_file(path("cfg.ini"), "jobs=2\nseed=5\n");
  small_fabric();
  EXPECT_EQ(run("--config " + path("cfg.ini") + " reverse --truth " + path("truth.json") + " --output " +
                path("c.db")),
            0)
      << err();
}

}  // namespace
}  // namespace bitrev
