#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "supertrace/builtins.hpp"
#include "supertrace/characterization.hpp"
#include "supertrace/invariants.hpp"

namespace supertrace::testing {

inline RationalPi rp(long num, long den = 1) { return RationalPi(num, den); }

inline VectorFunction vec(StepSpectrum s, std::string label = "") {
  return VectorFunction{{std::move(s)}, std::move(label)};
}

// Random modulation-free step spectrum with breakpoints on a 1/den grid inside [-span, span).
inline StepSpectrum random_spectrum(std::mt19937_64& rng, long span = 3, long den = 4,
                                    int pieces = 3) {
  std::uniform_int_distribution<long> pos(-span * den, span * den - 1);
  std::uniform_int_distribution<long> len(1, den);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<RawPiece> raw;
  long cursor = pos(rng);
  for (int p = 0; p < pieces; ++p) {
    const long right = cursor + len(rng);
    raw.push_back({rp(cursor, den), rp(right, den), {val(rng), val(rng)}, Rational(0)});
    cursor = right + len(rng) - 1;
  }
  return make_step_spectrum(std::move(raw));
}

inline Fiber random_fiber(std::mt19937_64& rng, int n, int entries = 4, long k_span = 3) {
  std::uniform_int_distribution<long> k(-k_span, k_span);
  std::uniform_int_distribution<int> i(0, n - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  Fiber f;
  for (int e = 0; e < entries; ++e) f.set({k(rng), i(rng)}, {val(rng), val(rng)});
  return f;
}

// Random rational point in [lo, hi) with a prime denominator that avoids dyadic breakpoints.
inline RationalPi random_point(std::mt19937_64& rng, long lo = -1, long hi = 1) {
  constexpr long kDen = 7919;
  std::uniform_int_distribution<long> num(lo * kDen, hi * kDen - 1);
  long v = num(rng);
  if (v % kDen == 0) ++v;
  return rp(v, kDen);
}

}  // namespace supertrace::testing
