#pragma once

#include <complex>

namespace exitlab {

// Compensated (Kahan) accumulator. The convolution and inversion layers sit
// on top of long series sums, so kernel-level rounding is kept at O(eps)
// independent of term count.
template <typename T>
class KahanSum {
 public:
  void add(T term) {
    T y = term - comp_;
    T t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  T value() const { return sum_; }

 private:
  T sum_{};
  T comp_{};
};

using KahanReal = KahanSum<double>;
using KahanComplex = KahanSum<std::complex<double>>;

}  // namespace exitlab
