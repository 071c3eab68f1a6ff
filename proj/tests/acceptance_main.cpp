#include <iostream>

#include "conjtime/acceptance.hpp"

int main() {
  bool all = true;
  conjtime::run_acceptance({}, [&](const conjtime::CriterionResult& r) {
    std::cout << conjtime::format_criterion(r) << std::endl;
    all = all && r.passed;
  });
  return all ? 0 : 1;
}
