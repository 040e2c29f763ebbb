#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "supertrace/rational.hpp"

namespace supertrace {

/// One piece of a step spectrum: `value * exp(-i * modulation * xi)`.
///
/// The modulation is a plain rational (not a multiple of pi); with xi = q*pi
/// the phase is exp(-i * pi * modulation * q), which is evaluated from the
/// exact product `modulation * q`.
struct Piece {
  Complex value{0.0, 0.0};
  Rational modulation{0};

  friend bool operator==(const Piece& a, const Piece& b) {
    return a.value == b.value && a.modulation == b.modulation;
  }
};

/// A piece on the half-open interval [left, right).
struct Segment {
  RationalPi left;
  RationalPi right;
  Piece piece;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Unchecked input record for make_step_spectrum.
struct RawPiece {
  RationalPi left;
  RationalPi right;
  Complex value{1.0, 0.0};
  Rational modulation{0};
};

/// A compactly supported, piecewise constant (optionally per-piece modulated)
/// function of frequency with exact rational-multiple-of-pi breakpoints.
///
/// Canonical form: segments sorted, pairwise disjoint, no zero values, and no
/// two touching segments with the same piece. Values between segments are 0.
class StepSpectrum {
 public:
  StepSpectrum() = default;

  const std::vector<Segment>& segments() const { return segments_; }
  bool is_zero() const { return segments_.empty(); }
  bool is_modulation_free() const;

  /// All distinct segment endpoints, increasing.
  std::vector<RationalPi> breakpoints() const;

  /// max(|x_0|, |x_M|); 0 for the zero spectrum.
  RationalPi outer_radius() const;
  /// Distance from 0 to the closed support; 0 when 0 is in it or when empty.
  RationalPi inner_radius() const;
  /// Left end of the support (0 for the zero spectrum).
  RationalPi support_begin() const;
  RationalPi support_end() const;

  /// Piece active at x under the half-open rule, or nullptr outside the support.
  const Piece* piece_at(const RationalPi& x) const;
  Complex operator()(const RationalPi& x) const;

  friend bool operator==(const StepSpectrum&, const StepSpectrum&) = default;

  /// Builds from segments that are already sorted and disjoint; merges and
  /// drops zeros. Exposed for the algebra routines.
  static StepSpectrum from_sorted_segments(std::vector<Segment> segments);

 private:
  std::vector<Segment> segments_;
};

/// Throws OverlappingPieces if two intervals overlap in positive measure and
/// InvalidArgument if some left >= right.
StepSpectrum make_step_spectrum(std::vector<RawPiece> raw);

/// chi_[a,b) times value.
StepSpectrum indicator(const RationalPi& a, const RationalPi& b, Complex value = {1.0, 0.0});

Complex evaluate(const StepSpectrum& s, const RationalPi& x);

/// xi -> s(c * xi), c > 0.
StepSpectrum dilate_arg(const StepSpectrum& s, const Rational& c);
/// xi -> s(xi + a).
StepSpectrum translate_arg(const StepSpectrum& s, const RationalPi& a);
/// s1 * conj(s2).
StepSpectrum pointwise_product_conj(const StepSpectrum& s1, const StepSpectrum& s2);
/// s1 * s2.
StepSpectrum pointwise_product(const StepSpectrum& s1, const StepSpectrum& s2);
/// |s|^2 with modulation dropped.
StepSpectrum modulus_squared(const StepSpectrum& s);
/// Throws ModulationConflict where both addends are nonzero with different modulations.
StepSpectrum add(const StepSpectrum& s1, const StepSpectrum& s2);
StepSpectrum sum(const std::vector<StepSpectrum>& terms);
StepSpectrum scale(const StepSpectrum& s, Complex c);
/// Multiplies every piece by a constant and adds a modulation (used for phase factors).
StepSpectrum modulate(const StepSpectrum& s, Complex factor, const Rational& extra_modulation);
/// s restricted to [a, b).
StepSpectrum restrict_to(const StepSpectrum& s, const RationalPi& a, const RationalPi& b);

/// A 2*pi-periodic step function stored by its restriction to [-pi, pi).
class PeriodicStep {
 public:
  PeriodicStep() = default;
  /// `window` must have support inside [-pi, pi) and be modulation free.
  explicit PeriodicStep(StepSpectrum window);

  static PeriodicStep constant(Complex value);

  const StepSpectrum& window() const { return window_; }
  Complex operator()(const RationalPi& x) const;
  /// The periodic extension restricted to [a, b).
  StepSpectrum extend(const RationalPi& a, const RationalPi& b) const;

  friend bool operator==(const PeriodicStep&, const PeriodicStep&) = default;

 private:
  StepSpectrum window_;
};

/// Per(s)(xi) = sum_k s(xi + 2k*pi). Throws ModulatedInput for modulated s.
PeriodicStep periodize(const StepSpectrum& s);
PeriodicStep add(const PeriodicStep& a, const PeriodicStep& b);

struct Cell {
  RationalPi left;
  RationalPi right;
  RationalPi mid;
};

/// Cells of [a, b) cut at every breakpoint of the given spectra.
std::vector<Cell> common_refinement(const std::vector<StepSpectrum>& spectra, const RationalPi& a,
                                    const RationalPi& b);
/// Cells of [a, b) cut at the given points (points outside (a, b) are ignored).
std::vector<Cell> cells_from_points(std::vector<RationalPi> points, const RationalPi& a,
                                    const RationalPi& b);

/// (1 / 2pi) * integral |s|^2.
double l2_norm_sq(const StepSpectrum& s);
/// Same quantity with each |value|^2 converted exactly from its double.
Rational l2_norm_sq_exact(const StepSpectrum& s);
/// Lebesgue measure of the support, in units of pi.
Rational support_measure(const StepSpectrum& s);

/// Integer levels m for which xi -> s(N^m xi) can be nonzero on a window whose
/// points satisfy min_abs <= |xi| <= max_abs, given supp s in {r <= |xi| <= R}:
/// [ceil(log_N(r / max_abs)), floor(log_N(R / min_abs))]. Requires r, min_abs > 0.
std::pair<long, long> dilation_levels(const RationalPi& inner, const RationalPi& outer,
                                      const RationalPi& min_abs, const RationalPi& max_abs,
                                      long scale);

}  // namespace supertrace
