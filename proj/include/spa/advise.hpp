#pragma once

#include <cstdint>

namespace spa {

// b: children per node, n: plan length, k: estimated adaptation count.
struct AdvisabilityQuery {
  double b = 1;
  double n = 0;
  double k = 0;
};

// True iff (b+1)^k < b^n, evaluated as k*ln(b+1) < n*ln(b) with a
// relative tolerance of 1e-12 (equality counts as "not advisable").
// Throws ValidationError unless b >= 1, n >= 0 and k >= 0.
bool advisability(const AdvisabilityQuery& q);

// log_{b+1} b: adaptation pays while k/n stays below this ratio.
double break_even_ratio(double b);

}  // namespace spa
