#include "spa/advise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spa/logic.hpp"

namespace spa {

bool advisability(const AdvisabilityQuery& q) {
  if (!(q.b >= 1) || !(q.n >= 0) || !(q.k >= 0))
    throw ValidationError("advisability needs b >= 1, n >= 0, k >= 0 (got b=" + std::to_string(q.b) +
                          ", n=" + std::to_string(q.n) + ", k=" + std::to_string(q.k) + ")");
  const long double adapt = static_cast<long double>(q.k) * std::log1p(static_cast<long double>(q.b));
  const long double scratch = static_cast<long double>(q.n) * std::log(static_cast<long double>(q.b));
  const long double scale = std::max<long double>(1.0L, std::fabs(adapt) + std::fabs(scratch));
  return scratch - adapt > 1e-12L * scale;
}

double break_even_ratio(double b) {
  if (!(b >= 1)) throw ValidationError("break-even ratio needs b >= 1");
  return std::log(b) / std::log1p(b);
}

}  // namespace spa
