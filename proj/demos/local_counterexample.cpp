// Period 2 but index divisible by 4 for a norm-one torus over a 5-adic field.

#include <iostream>

#include "tatekit/tatekit.hpp"

using namespace tatekit;

int main() {
  CounterexampleReport r = verify_counterexample_local(5, 5);
  std::cout << "period " << r.period.str() << ", 4 | index: " << (r.index_divisibility % 4 == 0 ? "yes" : "no") << "\n";
  for (const auto& w : r.witnesses)
    std::cout << "  quadratic class " << square_class_name(w.square_class)
              << ": restriction nontrivial = " << std::boolalpha << w.restriction_nontrivial << "\n";

  ResidueField f5 = ResidueField::prime(5);
  std::cout << "Teichmuller lift of 2 mod 125: " << teichmuller_lift(2, f5, 3).value.str() << "\n";
}
