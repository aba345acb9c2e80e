#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mlstrat/dataset.hpp"
#include "mlstrat/random.hpp"

namespace mlstrat {

/// Random dataset where each (sample, label) is positive independently with
/// probability `density`, drawn as a 53-bit uniform from Rng.
inline MultiLabelDataset random_dataset(std::size_t n_samples, std::size_t n_labels, double density,
                                        std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<LabelIndex>> labels(n_samples);
  for (auto& ys : labels)
    for (std::size_t l = 0; l < n_labels; ++l)
      if (static_cast<double>(rng.next() >> 11) * 0x1.0p-53 < density) ys.push_back(static_cast<LabelIndex>(l));
  return MultiLabelDataset(n_labels, std::move(labels));
}

}  // namespace mlstrat
