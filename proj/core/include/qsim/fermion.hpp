#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qsim {

using cdouble = std::complex<double>;

struct LadderOp {
  uint32_t mode;
  bool creation;  // a_p^dagger when true
  bool operator==(const LadderOp&) const = default;
};

/// Product of ladder operators as written: the leftmost operator acts last
/// on the ket (standard operator-product order).
using LadderProduct = std::vector<LadderOp>;

struct FermionTerm {
  cdouble coeff;
  LadderProduct ops;
};

/// Weighted sum of ladder-operator products over n spin-orbital modes.
class FermionSum {
 public:
  FermionSum() : modes_(0) {}
  explicit FermionSum(uint32_t modes) : modes_(modes) {}

  uint32_t modes() const { return modes_; }
  const std::vector<FermionTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(cdouble coeff, LadderProduct ops);

  FermionSum& operator+=(const FermionSum& other);
  FermionSum operator*(cdouble scalar) const;

  /// Conjugate transpose: reverse each product, toggle daggers, conjugate
  /// the coefficient. No normal ordering is performed.
  FermionSum dagger() const;

  /// Term-by-term equality as multisets of (coeff, product); enough to check
  /// identities like T^dagger = -T that hold without reordering.
  bool equals_termwise(const FermionSum& other, double tol = 1e-14) const;

  std::string str() const;

 private:
  uint32_t modes_;
  std::vector<FermionTerm> terms_;
};

}  // namespace qsim
