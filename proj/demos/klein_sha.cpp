// Sha of the Klein four norm-one torus, then the splitting tower that kills it.

#include <iostream>

#include "tatekit/tatekit.hpp"

using namespace tatekit;

int main() {
  GroupPtr v4 = make_group(FiniteGroup::klein_four());
  GlobalData data{v4, augmentation_module(Subgroup::trivial(v4)),
                  {{"a", Subgroup::generated_by(v4, {1})},
                   {"b", Subgroup::generated_by(v4, {2})},
                   {"c", Subgroup::generated_by(v4, {3})}}};

  KernelResult sha = sha1_S(data);
  std::cout << "|Sha^1| = " << sha.kernel.order()->str() << "\n";
  std::cout << "Shapiro form agrees: " << std::boolalpha
            << sha.kernel.same_structure(sha1_shapiro(data).kernel) << "\n";

  TowerConfig cfg{data, 2, std::nullopt, {}};
  for (std::size_t x = 1; x <= 3; ++x) cfg.tower_places.push_back({Subgroup::trivial(v4), x});
  SimulationReport rep = simulate_splitting_tower(cfg, sha.kernel.generator(0));
  std::cout << "s = " << rep.chosen_s << ", split by degree " << rep.splitting_degree.base << "^"
            << rep.splitting_degree.exponent << " (bound " << rep.bound.base << "^" << rep.bound.exponent << ")\n";
  for (const auto& step : rep.alpha_trace) {
    std::cout << "  " << step.name << " = [";
    for (std::size_t i = 0; i < step.value.coords.size(); ++i) std::cout << (i ? "," : "") << step.value.coords[i].str();
    std::cout << "]\n";
  }
}
