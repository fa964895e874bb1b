#include "qsim/fermion.hpp"

#include <algorithm>
#include <sstream>

#include "qsim/errors.hpp"

namespace qsim {

void FermionSum::add(cdouble coeff, LadderProduct ops) {
  for (const auto& op : ops) {
    if (op.mode >= modes_)
      throw index_error("mode " + std::to_string(op.mode) + " out of range for " +
                        std::to_string(modes_) + " modes");
  }
  terms_.push_back({coeff, std::move(ops)});
}

FermionSum& FermionSum::operator+=(const FermionSum& other) {
  if (other.modes_ != modes_)
    throw std::invalid_argument("FermionSum mode counts differ");
  for (const auto& t : other.terms_) terms_.push_back(t);
  return *this;
}

FermionSum FermionSum::operator*(cdouble scalar) const {
  FermionSum out = *this;
  for (auto& t : out.terms_) t.coeff *= scalar;
  return out;
}

FermionSum FermionSum::dagger() const {
  FermionSum out(modes_);
  for (const auto& t : terms_) {
    LadderProduct rev(t.ops.rbegin(), t.ops.rend());
    for (auto& op : rev) op.creation = !op.creation;
    out.terms_.push_back({std::conj(t.coeff), std::move(rev)});
  }
  return out;
}

bool FermionSum::equals_termwise(const FermionSum& other, double tol) const {
  if (modes_ != other.modes_ || terms_.size() != other.terms_.size()) return false;
  std::vector<bool> used(other.terms_.size(), false);
  for (const auto& t : terms_) {
    bool found = false;
    for (size_t j = 0; j < other.terms_.size(); ++j) {
      if (used[j]) continue;
      if (other.terms_[j].ops == t.ops &&
          std::abs(other.terms_[j].coeff - t.coeff) <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::string FermionSum::str() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    out << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag()
        << "i)";
    for (const auto& op : t.ops) out << " a" << (op.creation ? "+" : "") << op.mode;
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace qsim
