#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "arnold/verify.hpp"

int main(int argc, char** argv) {
  arnold::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--quick") {
      opt.quick = true;
    } else if (arg == "--only" && i + 1 < argc) {
      opt.only.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--quick] [--only N]...\n";
      return 2;
    }
  }
  const auto results = arnold::run_acceptance(opt, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (failed == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failed)) << std::endl;
  return failed == 0 ? 0 : 1;
}
