// Single run of the 2-dependent product model with the innovation scale
// moving from 1 to 1.26 after observation 500 of 1000.

#include <cstdio>

#include "cssm/cssm.hpp"

int main() {
  const cssm::ChangeSpec change{500, cssm::ModelSpec{cssm::Product2Dep{0.0, 1.0}},
                                cssm::ModelSpec{cssm::Product2Dep{0.0, 1.26}}};
  const cssm::TimeSeries x = cssm::simulate_with_change(change, 1000, cssm::kDefaultSeed);
  const cssm::TestResult r = cssm::cssm_test(x, 1, cssm::EstimatorConfig{}, 0.05);
  std::printf("statistic %.4f  critical %.3f  reject %s  change at %zu\n",
              r.statistic, r.critical_value, r.reject ? "yes" : "no",
              r.change_index);
}
