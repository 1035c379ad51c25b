#pragma once

#include <cmath>
#include <sstream>

#include "freqstab/errors.hpp"

namespace freqstab {

struct CrossingSearch {
  double step = 1.0;         // bracket expansion step
  double horizon = 1.0e7;    // give up (no-crossing) past this point
  double tolerance = 1e-9;   // bisection stops when the bracket is this small
  int max_iterations = 500;
};

/// Smallest t > start where g(t) >= 0, for g that starts negative. The
/// bracket is grown in fixed steps, then closed by bisection.
template <class G>
double first_root_after(G&& g, double start, const CrossingSearch& opt) {
  double lo = start;
  double g_lo = g(lo);
  if (g_lo >= 0.0) return lo;
  double hi = lo;
  for (;;) {
    hi = lo + opt.step;
    if (hi > start + opt.horizon) {
      std::ostringstream os;
      os << "no crossing within " << opt.horizon << " s of t=" << start;
      throw Error(ErrorCode::NoCrossing, os.str());
    }
    if (g(hi) >= 0.0) break;
    lo = hi;
  }
  int it = 0;
  while (hi - lo > opt.tolerance) {
    if (++it > opt.max_iterations) {
      throw Error(ErrorCode::NoConvergence, "bisection did not converge");
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace freqstab
