#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aenmf/dense.hpp"
#include "aenmf/graph.hpp"

namespace aenmf {

// One modality's d_v x n feature matrix. All modalities of a dataset share n.
struct ModalityData {
  std::string name;
  Matrix x;
  // Built on demand by the solver when absent.
  std::optional<GraphPrior> prior;
};

using Labels = std::vector<int>;

}  // namespace aenmf
