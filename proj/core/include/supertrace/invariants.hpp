#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "supertrace/fibers.hpp"

namespace supertrace {

class SISpace;
struct CheckReport;

/// Marks V as spanned by an NTF generator after checking fiber frame bounds;
/// defined with the characterization checks.
CheckReport certify_ntf_generator(SISpace& v, const AffineStructure& a, double tol);

/// A shift invariant subspace given extensionally by generators.
class SISpace {
 public:
  SISpace() = default;
  explicit SISpace(std::vector<VectorFunction> generators) : generators_(std::move(generators)) {}

  const std::vector<VectorFunction>& generators() const { return generators_; }
  bool is_zero() const;
  /// True only after certify_ntf_generator passed on this generator list.
  bool ntf_verified() const { return ntf_verified_; }

 private:
  friend CheckReport certify_ntf_generator(SISpace& v, const AffineStructure& a, double tol);
  std::vector<VectorFunction> generators_;
  bool ntf_verified_ = false;
};

/// A value whose formula assumes an NTF generator that was not certified.
template <typename T>
struct Tagged {
  T value{};
  bool unverified = false;
};

/// sum over generators of |<f, fiber(phi, xi)>|^2
Tagged<double> local_trace_vector(const SISpace& v, const AffineStructure& a, const Fiber& f,
                                  const RationalPi& xi);
/// sum over generators of <T fiber, fiber>
Tagged<Complex> local_trace_operator(const SISpace& v, const AffineStructure& a,
                                     const FiberOperator& t, const RationalPi& xi);

/// sum over generators of fiber(k, i) * conj(fiber(l, j)).
Complex dual_gramian_entry(const SISpace& v, const AffineStructure& a, const FiberIndex& row,
                           const FiberIndex& col, const RationalPi& xi);

/// sum over generators of |phi_i^|^2(xi - theta_i); component i is 0-based.
StepSpectrum spectral_function(const SISpace& v, const AffineStructure& a, int i);
/// sum_i Per(spectral_function(v, a, i)).
PeriodicStep dimension_function(const SISpace& v, const AffineStructure& a);

int multiplicity_at(const SISpace& v, const AffineStructure& a, const RationalPi& xi,
                    double rel_tol = kDefaultRankTolerance);

/// Per fiber cell of [-pi, pi), list-order Gram-Schmidt of the generator
/// fibers. Output j has fibers equal to the j-th orthonormal vector where the
/// rank is at least j + 1 and zero elsewhere. Throws ModeUnsupported for
/// modulated generators.
std::vector<VectorFunction> extract_quasi_orthogonal(const SISpace& v, const AffineStructure& a,
                                                     double rel_tol = kDefaultRankTolerance);

/// Uniform grid of `count` points on [lo, hi) shifted off the lattice by a
/// fixed fraction of the step.
std::vector<RationalPi> grid_points(const RationalPi& lo, const RationalPi& hi, int count);
/// One point per grid step at a seeded rational offset inside the step.
std::vector<RationalPi> seeded_points(const RationalPi& lo, const RationalPi& hi, int count,
                                      std::uint64_t seed);

/// max over the grid on [-pi, pi) of |tau_{U^-1 V, T} - sum_l tau_{V, S*D_l*TD_lS}((xi + 2l pi)/N)|.
double dilation_check(const SISpace& v, const AffineStructure& a, const FiberOperator& t,
                      int grid_count);

struct ExactResidual {
  double max_residual = 0.0;
  long cells_checked = 0;
};

/// Spectral functions of U^-1 V against the dilated and translated spectral
/// functions of V, compared exactly on the whole line.
ExactResidual spectral_dilation_check(const SISpace& v, const AffineStructure& a);
/// Dimension function of U^-1 V against sum_l dim_V((xi + 2l pi)/N) on [-pi, pi).
ExactResidual dim_dilation_check(const SISpace& v, const AffineStructure& a);

struct LimitProbe {
  std::vector<double> values;      // index m = 0..m_max
  std::optional<long> settled_at;  // first m from which every value is within tol of 1
};

/// sum over generators of |phi_i^|^2(xi / N^m) for m = 0..m_max. Throws InvalidPoint for xi = 0.
LimitProbe scaling_limit_probe(const SISpace& v, const AffineStructure& a, int i,
                               const RationalPi& xi, long m_max, double tol = 1e-12);

}  // namespace supertrace
