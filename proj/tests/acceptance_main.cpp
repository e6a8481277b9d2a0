#include <iostream>

#include "mheat/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  const auto results = mheat::run_acceptance(std::cout, which);
  return mheat::all_passed(results) ? 0 : 1;
}
