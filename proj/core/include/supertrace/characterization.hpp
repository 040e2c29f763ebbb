#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supertrace/invariants.hpp"

namespace supertrace {

enum class Mode { Exact, Grid };
std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kGridTolerance = 1e-9;
inline constexpr int kDefaultGridPoints = 1024;
inline constexpr long kDefaultGridLevels = 12;

struct CheckOptions {
  Mode mode = Mode::Exact;
  int grid_points = kDefaultGridPoints;
  long grid_levels = kDefaultGridLevels;  // m in [-M, M] when supports touch 0 (grid mode)
  std::optional<double> tolerance;        // defaults by mode
  bool all_pairs = false;                 // also check i > j

  double effective_tolerance() const {
    return tolerance ? *tolerance : (mode == Mode::Exact ? kExactTolerance : kGridTolerance);
  }
};

struct Witness {
  std::string equation;
  RationalPi xi;
  std::optional<std::pair<RationalPi, RationalPi>> cell;
  int i = 0;  // 0-based
  int j = 0;
  std::string index_name;  // "k", "s", "q" or empty
  long index = 0;
  Complex value{};
};

struct Sample {
  RationalPi xi;
  double value = 0.0;
};

struct CheckReport {
  bool passed = true;
  Mode mode = Mode::Exact;
  double max_residual = 0.0;
  double tolerance = kExactTolerance;
  std::optional<Witness> witness;
  long cells_checked = 0;
  std::vector<std::string> notes;
  std::vector<Sample> samples;  // one per checked cell or grid point
};

enum class SystemTag { Candidate, VerifiedNtf, VerifiedOrthonormal };
std::string_view to_string(SystemTag tag);

/// A finite set Psi of candidate wavelets for an affine structure.
class WaveletSystem {
 public:
  /// Throws InvalidStructure or InvalidArgument on inconsistent input.
  WaveletSystem(AffineStructure structure, std::vector<VectorFunction> psis);

  const AffineStructure& structure() const { return structure_; }
  const std::vector<VectorFunction>& psis() const { return psis_; }
  SystemTag tag() const { return tag_; }
  bool verified() const { return tag_ != SystemTag::Candidate; }

 private:
  friend CheckReport verify_wavelet_system(WaveletSystem& w, const CheckOptions& options);
  AffineStructure structure_;
  std::vector<VectorFunction> psis_;
  SystemTag tag_ = SystemTag::Candidate;
};

/// Frame bounds of the generator fibers must equal 1 wherever the rank is
/// positive. Sets v.ntf_verified() on success.
CheckReport certify_ntf_generator(SISpace& v, const AffineStructure& a,
                                  double tol = 1e-10);

/// The translate-system equation with target delta_ij delta_k on [lo, hi).
CheckReport check_ntf_translates(const std::vector<VectorFunction>& family,
                                 const AffineStructure& a, const RationalPi& lo,
                                 const RationalPi& hi, const CheckOptions& options = {});

/// The scale-sum equations (pairs with equal angles) and offset-sum equations
/// (s not divisible by N) for the affine system of Psi.
CheckReport check_super_wavelet(const WaveletSystem& w, const CheckOptions& options = {});
/// Runs check_super_wavelet and upgrades the tag when it passes.
CheckReport verify_wavelet_system(WaveletSystem& w, const CheckOptions& options = {});
CheckReport check_wavelet_scalar(const std::vector<StepSpectrum>& psis, long scale = 2,
                                 const CheckOptions& options = {});
/// Cross equations between two scalar wavelets of equal cardinality.
CheckReport check_strong_disjointness(const std::vector<StepSpectrum>& psis,
                                      const std::vector<StepSpectrum>& others, long scale = 2,
                                      const CheckOptions& options = {});

/// Generators xi -> psi^_{sigma^m(i)}(N^m xi), m = 1..max_level, of the core space.
SISpace core_space(const WaveletSystem& w, long max_level);

struct ScalingSpectral {
  StepSpectrum value;
  Rational excluded_measure{0};  // units of pi
  bool unverified = false;
};

/// sum_psi sum_{m>=1} |psi^_{sigma^m(i)}|^2(N^m(xi - theta_i)) on [lo, hi) minus the
/// eps-ball around theta_i. Throws WindowTouchesAccumulationPoint when eps <= 0
/// and theta_i lies in the closed window.
ScalingSpectral scaling_spectral_function(const WaveletSystem& w, int i, const RationalPi& lo,
                                          const RationalPi& hi, const RationalPi& eps);

/// Spectral functions of S(phis) against the scaling spectral functions.
CheckReport gripenberg_weiss_residual(const WaveletSystem& w,
                                      const std::vector<VectorFunction>& phis,
                                      const RationalPi& lo, const RationalPi& hi,
                                      const RationalPi& eps);

struct DimensionSample {
  RationalPi xi;
  double value = 0.0;
  int rank = 0;         // fiber rank of the truncated core generators
  long max_level = 0;   // largest m contributing at xi
};

/// D_Psi at one point. Throws InvalidPoint when a lattice point hits 0 on a
/// support that touches the origin.
DimensionSample wavelet_dimension_at(const WaveletSystem& w, const RationalPi& xi,
                                     double rel_tol = kDefaultRankTolerance);
std::vector<DimensionSample> wavelet_dimension_function(const WaveletSystem& w,
                                                        const std::vector<RationalPi>& points,
                                                        double rel_tol = kDefaultRankTolerance);

struct LowerBoundProbe {
  std::vector<double> values;  // m = 1..depth
  int cardinality = 0;         // #{i : theta_i = alpha0}
  double tail_max = 0.0;
  bool passed = false;
  bool hypothesis_unmet = false;  // Psi was not verified
};

LowerBoundProbe lower_bound_probe(const WaveletSystem& w, const RationalPi& alpha0,
                                  const RationalPi& xi0, long depth, double tol = kGridTolerance);

/// p copies of xi -> psi^(p xi) on the oversampling structure for (N, p).
WaveletSystem oversample(const std::vector<StepSpectrum>& psis, long scale, long p,
                         const std::vector<std::string>& labels = {});

/// For |q| <= bound: q not in NZ iff q = N l + p s with |l| <= p - 1 and s not in NZ.
CheckReport offset_set_check(long scale, long p, long bound);

}  // namespace supertrace
