// Runs every acceptance criterion and prints one line per criterion.

#include <cstdlib>
#include <iostream>

#include "ncgrad/reproduce.hpp"

int main(int argc, char** argv) {
  ncgrad::ReproduceOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
  bool all = true;
  for (const auto& criterion : ncgrad::criteria()) {
    const auto result = ncgrad::run_criterion(criterion.id, options);
    std::cout << ncgrad::summary_line(result) << "\n" << result.detail << std::flush;
    all = all && result.pass;
  }
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
  return all ? 0 : 1;
}
