#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

using json = nlohmann::json;

namespace {

std::string bin() {
  const char *p = std::getenv("PERFISO_BIN");
  REQUIRE(p != nullptr);
  return p;
}

struct RunOut {
  int status;
  std::string out;
};

RunOut run(const std::string &args) {
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf;
  std::string out;
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

std::vector<json> lines_of(const std::string &out) {
  std::vector<json> lines;
  size_t pos = 0;
  while (pos < out.size()) {
    size_t nl = out.find('\n', pos);
    if (nl == std::string::npos) nl = out.size();
    std::string line = out.substr(pos, nl - pos);
    if (!line.empty()) lines.push_back(json::parse(line));
    pos = nl + 1;
  }
  return lines;
}

} // namespace

TEST_CASE("tables a4 emits a validated table") {
  RunOut r = run("tables a4");
  CHECK(r.status == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0]["verdict"] == "orthogonality");
  CHECK(lines[0]["pass"] == true);
  const json &table = lines.back()["table"];
  CHECK(table["group"] == "A4");
  CHECK(table["chars"].size() == 4);
}

TEST_CASE("tables product cyclic:4 a4") {
  RunOut r = run("tables product cyclic:4 a4");
  CHECK(r.status == 0);
  auto lines = lines_of(r.out);
  const json &table = lines.back()["table"];
  CHECK(table["order"] == 48);
  CHECK(table["chars"].size() == 16);
}

TEST_CASE("reports are byte-identical across runs") {
  RunOut a = run("verify prop24");
  RunOut b = run("verify prop24");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  auto lines = lines_of(a.out);
  CHECK(lines.back()["summary"]["overall_pass"] == true);
}

TEST_CASE("table dumps re-ingest bit-exactly") {
  std::string f1 = "/tmp/perfiso_tab1.json", f2 = "/tmp/perfiso_tab2.json";
  RunOut a = run("tables product cyclic:2 a4 --out " + f1);
  CHECK(a.status == 0);
  RunOut b = run("ingest " + f1 + " --out " + f2);
  CHECK(b.status == 0);
  auto grab_table = [](const std::string &path) {
    std::ifstream f(path);
    std::string line, got;
    while (std::getline(f, line))
      if (line.find("\"table\"") != std::string::npos) got = line;
    return got;
  };
  std::string t1 = grab_table(f1), t2 = grab_table(f2);
  CHECK(!t1.empty());
  CHECK(t1 == t2);
}

TEST_CASE("verify blocks passes and is a proper jsonl stream") {
  RunOut r = run("verify blocks");
  CHECK(r.status == 0);
  auto lines = lines_of(r.out);
  bool found = false;
  for (const auto &l : lines)
    if (l.contains("verdict") && l["verdict"] == "blocks") {
      found = true;
      CHECK(l["pass"] == true);
    }
  CHECK(found);
}

TEST_CASE("node limit aborts with a distinguished failure") {
  RunOut r = run("verify prop26 --n 3 --node-limit 1000");
  CHECK(r.status == 1);
  auto lines = lines_of(r.out);
  bool flagged = false;
  for (const auto &l : lines)
    if (l.contains("details") && l["details"].contains("node_limit_hit"))
      flagged = l["details"]["node_limit_hit"].get<bool>();
  CHECK(flagged);
}

TEST_CASE("verify lemma-roots on the small range") {
  RunOut r = run("verify lemma-roots --n 2");
  CHECK(r.status == 0);
  auto lines = lines_of(r.out);
  CHECK(lines.back()["summary"]["overall_pass"] == true);
}

TEST_CASE("unknown target fails with exit code 2") {
  RunOut r = run("verify nonsense");
  CHECK(r.status == 2);
}
