#pragma once

#include <vector>

#include "morse2d/grid.hpp"
#include "morse2d/nonlinearity.hpp"

namespace morse2d {

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending, the k smallest
  int morse_index = 0;              // count of negative entries
  bool semi_stable = false;         // eigenvalues[0] >= 0
};

/// k smallest Dirichlet eigenvalues of -Lap - f'(u) on the grid's interior,
/// by shifted inverse power iteration with deflation.
SpectrumResult linearized_spectrum(const GridField& u, const Nonlinearity& f, int k);

}  // namespace morse2d
