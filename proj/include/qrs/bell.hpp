// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "qrs/density_matrix.hpp"

namespace qrs {

// Bell state vector indexed by (i, j) in {0,1}^2:
//   |b_ij> = (sz^i ot I)(sx^j ot I) (|00> + |11>)/sqrt(2)
// (0,0) is the resource state the sender distributes; the X/Z tests measure
// the two stabilizer signs that single out (0,0) among the four.
inline Vec4 bell_vector(int i, int j) {
  if ((i != 0 && i != 1) || (j != 0 && j != 1))
    throw parameter_error("bell_vector indices must be 0 or 1");
  const double inv = 1.0 / std::sqrt(2.0);
  // (|00> + |11>)/sqrt(2) has first-slot components |0> and |1> paired with
  // matching second-slot components; apply sx^j then sz^i to the first slot.
  Vec4 v = Vec4::Zero();
  for (int b = 0; b < 2; ++b) {
    int flipped = b ^ j;
    double sign = (i == 1 && flipped == 1) ? -1.0 : 1.0;
    v(2 * flipped + b) += cplx(sign * inv, 0.0);
  }
  return v;
}

inline Density4 bell_state(int i, int j) { return Density4::pure(bell_vector(i, j)); }

}  // namespace qrs
