// Copyright 2026 The tkq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

// Compiles a small generated instance into each QUBO variant and compares
// the samplers against the exact optimum.

#include <iostream>

#include "tkq.hpp"

int main() {
  using namespace tkq;
  const Instance inst = sanitize_instance(generate_instance(3, 2, 4, 11));
  const Solution best = exact_solve(inst);
  std::cout << inst.id << ": optimum " << to_string(best.cost) << "\n";

  for (const VariantSpec& variant : {VariantSpec{RawPenalty{Rational(100000), Rational(1000000000)}},
                                     VariantSpec{ScaledPenalty{Rational(1)}}, VariantSpec{RoundedCost{}}}) {
    const Qubo q = build_qubo(inst, variant);
    const auto minimizer = brute_force_qubo(q);
    const auto sa = postprocess(q, simulated_anneal(q, SaConfig{.restarts = 100, .seed = 1}));
    const auto qaoa = run_lrqaoa(q, lr_schedule(5), 1000, 1);

    std::cout << "  " << penalty_label(variant) << " with " << q.n << " variables\n";
    if (auto a = decode(q, minimizer.bits).assignment(); a && validate_assignment(inst, *a).feasible)
      std::cout << "    QUBO minimum decodes to cost " << to_string(solution_cost(inst, *a)) << "\n";
    else
      std::cout << "    QUBO minimum is not a valid assignment\n";
    for (const auto* samples : {&sa, &qaoa}) {
      const auto ratio = best_cost_ratio(*samples, inst, q, best.cost);
      std::cout << "    " << samples->meta.solver << ": valid " << to_double(percent_valid(*samples, inst, q))
                << ", best/opt ratio " << (ratio ? std::to_string(to_double(*ratio)) : "undefined") << "\n";
    }
  }
}
