#include "qsim/rng.hpp"

#include <cmath>

namespace qsim {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, q;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  double scale = std::sqrt(-2.0 * std::log(q) / q);
  spare_ = v * scale;
  have_spare_ = true;
  return u * scale;
}

}  // namespace qsim
