#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "tbg/lattice.hpp"

namespace testsupport {

using namespace tbg;

inline std::vector<cplx> random_points(int n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng));
  return out;
}

// generic k away from Lambda* and from the high-symmetry points
inline std::vector<cplx> random_k(int n, unsigned seed) {
  std::vector<cplx> out;
  for (cplx k : random_points(4 * n, -3.0, 3.0, seed)) {
    const auto kp = classify_k(k);
    if (kp.cls != KClass::Generic) continue;
    bool near = false;
    for (cplx c : {cplx(0.0), cplx(K), cplx(-K)})
      for (int m = -1; m <= 1; ++m)
        for (int n2 = -1; n2 <= 1; ++n2)
          if (std::abs(reduce_to_cell(k) - c - dual_point(m, n2)) < 0.3) near = true;
    if (!near) out.push_back(k);
    if (static_cast<int>(out.size()) == n) break;
  }
  return out;
}

}  // namespace testsupport
