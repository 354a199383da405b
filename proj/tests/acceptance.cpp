// Acceptance report: one PASS/FAIL line per criterion.
//
//   acceptance [--transcript FILE] [--only N]
//
// Criterion 12 reruns suites 1-11 in the same process and compares the two
// transcripts byte for byte.  Exit status 0 iff every criterion passes.

#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>

#include "suites.hpp"

namespace {

struct Run {
  std::string transcript;
  std::map<int, suites::Outcome> outcomes;
  std::map<int, double> seconds;
};

Run run_all(const std::set<int>& only) {
  Run r;
  std::ostringstream log;
  for (const auto& s : suites::all_suites()) {
    if (!only.empty() && !only.count(s.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    suites::Outcome o;
    std::ostringstream part;
    try {
      o = s.run(part);
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
      part << "exception: " << e.what() << "\n";
    }
    r.seconds[s.id] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << "== " << s.id << " " << s.name << " " << (o.pass ? "PASS" : "FAIL") << "\n" << part.str();
    r.outcomes[s.id] = o;
  }
  r.transcript = log.str();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::string transcript_path;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--transcript") && i + 1 < argc) transcript_path = argv[++i];
    else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only.insert(std::atoi(argv[++i]));
    else {
      std::cerr << "usage: acceptance [--transcript FILE] [--only N]...\n";
      return 2;
    }
  }
  std::cout << std::unitbuf;
  std::cout << "tolerance: " << suites::kTolerance << " (exact rational arithmetic)\n";

  Run first = run_all(only);
  bool all = true;
  for (const auto& s : suites::all_suites()) {
    auto it = first.outcomes.find(s.id);
    if (it == first.outcomes.end()) continue;
    all &= it->second.pass;
    std::cout << (it->second.pass ? "PASS" : "FAIL") << " criterion " << s.id << " " << s.name << ": "
              << it->second.summary << "\n";
    std::cerr << "  [" << s.id << "] " << first.seconds[s.id] << " s\n";
  }
  if (only.empty() || only.count(12)) {
    std::set<int> rerun = only;
    rerun.erase(12);
    if (!only.empty() && rerun.empty()) rerun = {1, 3, 10};
    Run second = run_all(rerun.empty() ? only : rerun);
    Run base = (only.empty() || rerun == only) ? first : run_all(rerun);
    bool same = base.transcript == second.transcript && !second.transcript.empty();
    all &= same;
    std::cout << (same ? "PASS" : "FAIL") << " criterion 12 determinism: two runs, "
              << second.transcript.size() << " transcript bytes, " << (same ? "identical" : "different") << "\n";
  }
  if (!transcript_path.empty()) {
    std::ofstream out(transcript_path);
    out << first.transcript;
  }
  std::cout << (all ? "ALL PASS" : "SOME FAILED") << "\n";
  return all ? 0 : 1;
}
