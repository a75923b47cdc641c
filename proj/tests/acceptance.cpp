// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.  Exits nonzero if any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "pinzero/acceptance.hpp"

int main(int argc, char** argv) {
  pinzero::AcceptanceOptions opt;
  opt.threads = pinzero::default_thread_count();
  if (const char* env = std::getenv("PINZERO_CACHE_DIR")) opt.cache_dir = env;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) opt.threads = std::atoi(argv[++i]);
    if (std::strcmp(argv[i], "--cache-dir") == 0 && i + 1 < argc) opt.cache_dir = argv[++i];
  }
  std::printf("acceptance suite (threads=%d, cache=%s)\n", opt.threads,
              opt.cache_dir.string().c_str());
  std::vector<pinzero::CriterionResult> results = pinzero::run_acceptance(opt);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  std::printf("summary: %zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
