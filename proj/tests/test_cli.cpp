/*
  Copyright 2026 The soapguard Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

// Runs the soapguard executable and checks exit codes and streams.

#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string cli = SOAPGUARD_CLI;
const fs::path fixtures = SOAPGUARD_TEST_FIXTURES;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("soapguard-cli-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path operator/(const std::string& name) const { return path / name; }
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s)
    q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// `env` is a prefix such as "SOAPGUARD_FIXTURES=/x " placed before the binary.
Run run(const std::string& args, const std::string& env = "") {
  static TempDir scratch;
  static int counter = 0;
  fs::path err = scratch / ("err" + std::to_string(counter++));
  std::string cmd = env + quote(cli) + " " + args + " 2>" + quote(err.string());
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;)
    r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string fx(const char* name) { return quote((fixtures / name).string()); }

} // namespace

TEST_CASE("cli: help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 64);
  CHECK(run("frobnicate").code == 64);
  CHECK(run("sign --in " + fx("fig3_pre.xml") + " --strategy fastxpath").code == 64);
  Run r = run("bench --repetitions 1");
  CHECK(r.code == 64);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("cli: sign") {
  TempDir t;
  Run r = run("sign --in " + fx("fig3_pre.xml") + " --strategy id --target CMPE");
  CHECK(r.code == 0);
  CHECK(r.out.find("URI=\"#CMPE\"") != std::string::npos);

  CHECK(run("sign --in " + fx("fig3_pre.xml") + " --strategy sesoap --out " + quote((t / "s.xml").string())).code == 0);
  CHECK(slurp(t / "s.xml").find("ds:Signature") != std::string::npos);

  CHECK(run("sign --in " + fx("fig3_pre.xml") + " --strategy id --target missing").code == 3);
  CHECK(run("sign --in " + fx("fig3_pre.xml") + " --strategy xpath --target /soap:Envelope/soap:Nope").code == 3);
  spit(t / "bad.xml", "<soap:Envelope");
  CHECK(run("sign --in " + quote((t / "bad.xml").string()) + " --strategy sesoap").code == 2);
  CHECK(run("sign --in " + quote((t / "absent.xml").string()) + " --strategy sesoap").code == 2);
  CHECK(run("sign --in " + fx("fig3_attacked.xml") + " --strategy sesoap").code == 2);
  CHECK(run("sign --in " + fx("fig3_pre.xml") + " --strategy id").code == 64);

  // stdin
  Run piped = run("sign --in - --strategy sesoap < " + fx("fig3_pre.xml"));
  CHECK(piped.code == 0);
  CHECK(piped.out.find("enveloped-signature") != std::string::npos);
}

TEST_CASE("cli: verify exit codes and warnings on stderr") {
  TempDir t;
  Run attacked = run("verify --in " + fx("fig3_attacked.xml"));
  CHECK(attacked.code == 0);
  CHECK(attacked.out.find("overall: valid") != std::string::npos);
  CHECK(attacked.err.find("warning") != std::string::npos);

  Run machine = run("verify --format machine --in " + fx("fig3_attacked.xml"));
  CHECK(machine.code == 0);
  CHECK(machine.out.rfind("kind\tsignature\tstrategy\turi\tresolved\tstatus\n", 0) == 0);
  CHECK(machine.out.find("warning:") == std::string::npos);

  CHECK(run("verify --in " + fx("fig3_pre.xml")).code == 4);
  spit(t / "bad.xml", "<a><b></a>");
  CHECK(run("verify --in " + quote((t / "bad.xml").string())).code == 2);

  // SESOAP signature broken by the wrapping attack
  Run s = run("sign --in " + fx("fig3_pre.xml") + " --strategy sesoap --out " + quote((t / "s.xml").string()));
  REQUIRE(s.code == 0);
  Run a = run("attack --attack simple --in " + quote((t / "s.xml").string()) + " --out " +
              quote((t / "a.xml").string()));
  REQUIRE(a.code == 0);
  CHECK(run("verify --in " + quote((t / "s.xml").string())).code == 0);
  CHECK(run("verify --in " + quote((t / "a.xml").string())).code == 1);

  // unknown key under --trust
  CHECK(run("verify --trust --key-seed another-key --in " + quote((t / "s.xml").string())).code == 1);
  CHECK(run("verify --trust --in " + quote((t / "s.xml").string())).code == 0);
}

TEST_CASE("cli: verify --policy") {
  Run r = run("verify --policy --in " + fx("fig3_attacked.xml"));
  CHECK(r.out.find("policy violated") != std::string::npos);
}

TEST_CASE("cli: attack") {
  TempDir t;
  CHECK(run("attack --attack simple --in " + fx("fig3_pre.xml")).code == 5);
  CHECK(run("attack --attack sibling-value --in " + fx("fig3_attacked.xml")).code == 5);
  CHECK(run("attack --attack optional --target wsa:To --in " + fx("fig3_attacked.xml")).code == 5);
  CHECK(run("attack --attack bogus --in " + fx("fig3_attacked.xml")).code == 64);

  // payload and new id flags
  REQUIRE(run("sign --in " + fx("fig3_pre.xml") + " --strategy id --target CMPE --out " +
              quote((t / "s.xml").string())).code == 0);
  spit(t / "p.xml", "<transfer amount=\"1000000\"/>");
  Run r = run("attack --attack simple --payload " + quote((t / "p.xml").string()) + " --new-id evil --in " +
              quote((t / "s.xml").string()));
  CHECK(r.code == 0);
  CHECK(r.out.find("evil") != std::string::npos);
  CHECK(r.out.find("amount=\"1000000\"") != std::string::npos);
}

TEST_CASE("cli: matrix matches the golden, a tampered golden gives a diff") {
  TempDir t;
  Run ok = run("matrix");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("SESOAP") != std::string::npos);

  Run m = run("matrix --format machine");
  CHECK(m.code == 0);
  CHECK(m.out.rfind("strategy\tattack\tverdict\t", 0) == 0);

  std::string golden = slurp(fixtures / "expected_matrix.tsv");
  const std::string cell = "XPATH\tSIBLING_VALUE\tVULNERABLE";
  auto at = golden.find(cell);
  REQUIRE(at != std::string::npos);
  golden.replace(at, cell.size(), "XPATH\tSIBLING_VALUE\tDETECTED");
  spit(t / "expected.tsv", golden);
  Run bad = run("matrix --expected " + quote((t / "expected.tsv").string()));
  CHECK(bad.code == 1);
  CHECK(bad.err.find("SIBLING_VALUE") != std::string::npos);
}

TEST_CASE("cli: SOAPGUARD_FIXTURES overrides the fixture directory") {
  TempDir t;
  for (const auto& e : fs::directory_iterator(fixtures))
    fs::copy(e.path(), t / e.path().filename().string());
  std::string env = "SOAPGUARD_FIXTURES=" + quote(t.path.string()) + " ";
  CHECK(run("matrix", env).code == 0);

  std::string golden = slurp(t / "expected_matrix.tsv");
  const std::string cell = "ID\tSIBLING_ORDER\tVULNERABLE";
  auto at = golden.find(cell);
  REQUIRE(at != std::string::npos);
  golden.replace(at, cell.size(), "ID\tSIBLING_ORDER\tDETECTED");
  spit(t / "expected_matrix.tsv", golden);
  CHECK(run("matrix", env).code == 1);

  CHECK(run("matrix", "SOAPGUARD_FIXTURES=/nonexistent/soapguard ").code == 2);
}

TEST_CASE("cli: bench insufficient data and machine output") {
  CHECK(run("bench --sizes 2000 --repetitions 5").code == 6);
  Run r = run("bench --sizes 2000,4000,8000 --repetitions 5 --warmup 0 --format machine");
  CHECK((r.code == 0 || r.code == 1));
  CHECK(r.out.rfind("# ", 0) == 0);
  CHECK(r.out.find("strategy,size_bytes,") != std::string::npos);
  CHECK(r.out.find("trend claims") == std::string::npos);
  CHECK(r.err.find("trend claims") != std::string::npos);
}

TEST_CASE("cli: demo") {
  Run r = run("demo");
  CHECK(r.code == 0);
  CHECK(r.out.find("== step 6") != std::string::npos);
  CHECK(r.out.find("signature rejected, injected request not executed") != std::string::npos);
}
