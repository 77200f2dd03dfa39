#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "perfiso/report.hpp"
#include "perfiso/verify.hpp"

using namespace perfiso;
using json = nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

TablePtr parse_atom(const std::string &spec) {
  if (spec == "a4") return a4_table();
  if (spec == "a5") return a5_table();
  if (spec.rfind("cyclic:", 0) == 0)
    return cyclic_table(std::stoul(spec.substr(7)));
  throw CLI::ValidationError("unknown group spec '" + spec + "'");
}

int run_tables(const std::vector<std::string> &spec, const std::string &out,
               bool timings) {
  TablePtr table;
  if (spec.empty()) throw CLI::ValidationError("tables: missing group spec");
  if (spec[0] == "cyclic") {
    if (spec.size() != 2) throw CLI::ValidationError("tables cyclic <m>");
    table = cyclic_table(std::stoul(spec[1]));
  } else if (spec[0] == "product") {
    if (spec.size() < 3)
      throw CLI::ValidationError("tables product <spec> <spec> ...");
    table = parse_atom(spec[1]);
    for (size_t i = 2; i < spec.size(); ++i)
      table = product_table(table, parse_atom(spec[i]));
  } else if (spec.size() == 1) {
    table = parse_atom(spec[0]);
  } else {
    throw CLI::ValidationError("tables: bad group spec");
  }

  RunReport report("tables", json{{"spec", spec}});
  auto t0 = std::chrono::steady_clock::now();
  bool ortho = true;
  try {
    table->validate();
  } catch (const std::exception &) {
    ortho = false;
  }
  report.add("orthogonality", ortho,
             json{{"chars", table->num_chars()},
                  {"order", table->group_order},
                  {"conductor", table->conductor}},
             seconds_since(t0));

  std::ostringstream body;
  report.emit(body, timings);
  if (ortho) body << json{{"table", table->to_json()}}.dump() << "\n";
  if (out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(out);
    f << body.str();
  }
  return report.overall_pass() ? 0 : 1;
}

int run_ingest(const std::string &file, const std::string &out, bool timings) {
  std::ifstream f(file);
  if (!f) throw CLI::ValidationError("cannot open " + file);
  // accept either a bare table object or the JSONL dump containing one
  json table_json;
  std::string line;
  bool found = false;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains("table")) {
      table_json = j["table"];
      found = true;
      break;
    }
    if (j.contains("group") && j.contains("chars")) {
      table_json = j;
      found = true;
      break;
    }
  }
  if (!found) throw CLI::ValidationError("no table object in " + file);
  CharTable t = CharTable::from_json(table_json);
  t.validate();
  RunReport report("ingest", json{{"file", file}});
  report.add("reingested", true,
             json{{"group", t.group_label}, {"chars", t.num_chars()}});
  std::ostringstream body;
  report.emit(body, timings);
  body << json{{"table", t.to_json()}}.dump() << "\n";
  if (out.empty())
    std::cout << body.str();
  else
    std::ofstream(out) << body.str();
  return 0;
}

struct VerifyArgs {
  int n = -1;
  std::string strategy = "auto";
  std::string prime_factor = "all";
  unsigned long long node_limit = 0;
  int jobs = 0;
  std::string out;
  bool timings = false;
};

VerifyOptions to_options(const VerifyArgs &a) {
  VerifyOptions o;
  o.jobs = a.jobs;
  if (a.node_limit > 0) o.node_limit = a.node_limit;
  o.prime_factor = a.prime_factor == "all" ? -1 : std::stoi(a.prime_factor);
  o.strategy = a.strategy;
  return o;
}

void append_target(RunReport &report, const TargetResult &t, double secs) {
  json d = t.details;
  if (t.node_limit_hit) d["node_limit_hit"] = true;
  report.add(t.name, t.pass, d, secs);
}

int emit_and_exit(const RunReport &report, const VerifyArgs &args) {
  if (args.out.empty()) {
    report.emit(std::cout, args.timings);
  } else {
    std::ofstream f(args.out);
    report.emit(f, args.timings);
  }
  return report.overall_pass() ? 0 : 1;
}

int run_verify(const std::string &target, const VerifyArgs &args) {
  if (args.jobs > 0) omp_set_num_threads(args.jobs);
  VerifyOptions opt = to_options(args);
  RunReport report("verify " + target,
                   json{{"n", args.n},
                        {"strategy", args.strategy},
                        {"prime_factor", args.prime_factor},
                        {"jobs", args.jobs}});
  auto t0 = std::chrono::steady_clock::now();
  auto timed = [&](TargetResult r) {
    append_target(report, r, seconds_since(t0));
    t0 = std::chrono::steady_clock::now();
  };

  if (target == "prop24") {
    timed(verify_prop24(opt));
  } else if (target == "prop26") {
    int n = args.n < 0 ? 1 : args.n;
    timed(verify_prop26(n, opt));
  } else if (target == "thm27") {
    int n = args.n < 0 ? 1 : args.n;
    timed(verify_thm27(n, opt));
  } else if (target == "lemma-roots") {
    int n = args.n < 0 ? 4 : args.n;
    timed(verify_lemma_roots(n, opt));
  } else if (target == "blocks") {
    timed(verify_blocks(opt));
  } else if (target == "cross-a4a5") {
    timed(verify_cross_a4a5(opt));
  } else if (target == "descent") {
    int n = args.n < 0 ? 1 : args.n;
    timed(verify_descent(n, opt));
  } else if (target == "centres") {
    int n = args.n < 0 ? 3 : args.n;
    timed(verify_centres(n, opt));
  } else {
    throw CLI::ValidationError("unknown verify target '" + target + "'");
  }
  return emit_and_exit(report, args);
}

int run_verify_all(const VerifyArgs &args) {
  if (args.jobs > 0) omp_set_num_threads(args.jobs);
  VerifyOptions opt = to_options(args);
  int nmax = args.n < 0 ? 1 : args.n;
  RunReport report("verify-all",
                   json{{"nmax", nmax},
                        {"prime_factor", args.prime_factor},
                        {"jobs", args.jobs}});
  auto t0 = std::chrono::steady_clock::now();
  auto timed = [&](TargetResult r) {
    append_target(report, r, seconds_since(t0));
    t0 = std::chrono::steady_clock::now();
  };

  timed(verify_prop24(opt));
  if (nmax >= 1) timed(verify_lemma_roots(std::min(nmax, 4), opt));
  timed(verify_blocks(opt));
  for (int n = 1; n <= std::min(nmax, 4); ++n) timed(verify_prop26(n, opt));
  for (int n = 1; n <= std::min(nmax, 3); ++n) timed(verify_thm27(n, opt));
  timed(verify_cross_a4a5(opt));
  for (int n = 1; n <= std::min(nmax, 2); ++n) timed(verify_descent(n, opt));
  timed(verify_centres(nmax, opt));
  return emit_and_exit(report, args);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"exact verification toolkit for perfect isometries of 2-blocks"};
  app.require_subcommand(1);

  // tables
  auto *tables = app.add_subcommand("tables", "emit a character table");
  std::vector<std::string> table_spec;
  std::string tables_out;
  bool tables_timings = false;
  tables->add_option("spec", table_spec, "a4 | a5 | cyclic <m> | product ...")
      ->expected(-1);
  tables->add_option("--out", tables_out, "write the dump to a file");
  tables->add_flag("--timings", tables_timings, "attach wall times");

  auto *ingest = app.add_subcommand("ingest", "re-ingest a table dump");
  std::string ingest_file, ingest_out;
  bool ingest_timings = false;
  ingest->add_option("file", ingest_file, "dump file")->required();
  ingest->add_option("--out", ingest_out, "write the dump to a file");
  ingest->add_flag("--timings", ingest_timings, "attach wall times");

  // verify / verify-all
  VerifyArgs vargs;
  std::string verify_target;
  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--n", vargs.n, "model parameter n (target specific)");
    cmd->add_option("--strategy", vargs.strategy,
                    "auto | exhaustive | proof-guided")
        ->check(CLI::IsMember({"auto", "exhaustive", "proof-guided"}));
    cmd->add_option("--prime-factor", vargs.prime_factor,
                    "prime choice: index or 'all'");
    cmd->add_option("--node-limit", vargs.node_limit,
                    "abort enumeration after this many candidates");
    cmd->add_option("--jobs", vargs.jobs, "worker threads");
    cmd->add_option("--out", vargs.out, "write the report to a file");
    cmd->add_flag("--timings", vargs.timings, "attach wall times");
  };
  auto *verify = app.add_subcommand("verify", "run one verification target");
  verify
      ->add_option("target", verify_target,
                   "prop24 | prop26 | thm27 | lemma-roots | blocks | "
                   "cross-a4a5 | descent | centres")
      ->required();
  add_common(verify);
  auto *verify_all =
      app.add_subcommand("verify-all", "run every target up to --n");
  add_common(verify_all);

  CLI11_PARSE(app, argc, argv);

  try {
    if (tables->parsed())
      return run_tables(table_spec, tables_out, tables_timings);
    if (ingest->parsed())
      return run_ingest(ingest_file, ingest_out, ingest_timings);
    if (verify->parsed()) return run_verify(verify_target, vargs);
    if (verify_all->parsed()) return run_verify_all(vargs);
  } catch (const CLI::ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
