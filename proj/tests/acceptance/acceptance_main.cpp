// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one pass/fail line each. Exit code 0 only if all pass.

#include <cstdio>
#include <iostream>

#include "kp/acceptance.hpp"

int main(int argc, char** argv) {
  kp::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) opts.criteria.push_back(std::atoi(argv[i]));

  const auto results = kp::run_acceptance(opts, &std::cout);
  int failures = 0;
  for (const auto& r : results)
    if (!r.pass) ++failures;
  std::printf("%zu criteria run, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
