#pragma once

namespace spinstar {

// Kahan compensated accumulator. The population series sums up to ~1e5
// bounded oscillatory terms at high temperature; compensation keeps the
// accumulated rounding error independent of the term count.
template <typename Value>
struct KahanAccumulator {
  Value sum{};
  Value compensation{};

  void add(Value value) {
    const Value y = value - compensation;
    const Value t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }

  KahanAccumulator& operator+=(Value value) {
    add(value);
    return *this;
  }

  Value value() const { return sum; }
};

}  // namespace spinstar
