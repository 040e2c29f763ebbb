#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "supertrace/fiber.hpp"
#include "supertrace/spectrum.hpp"
#include "supertrace/structure.hpp"

namespace supertrace {

/// Fourier transforms (phi_1^, ..., phi_n^) of a vector in the n-fold sum of L2(R).
struct VectorFunction {
  std::vector<StepSpectrum> components;
  std::string label;

  int size() const { return static_cast<int>(components.size()); }
  bool is_modulation_free() const;
  bool is_zero() const;
  RationalPi outer_radius() const;
  /// Minimum inner radius over the nonzero components (0 if all are zero).
  RationalPi inner_radius() const;

  friend bool operator==(const VectorFunction& a, const VectorFunction& b) {
    return a.components == b.components;
  }
};

double l2_norm_sq(const VectorFunction& v);
Rational l2_norm_sq_exact(const VectorFunction& v);

/// Throws ModeUnsupported unless every component of every function is modulation free.
void require_modulation_free(const std::vector<VectorFunction>& family, const std::string& what);
/// Throws InvalidArgument when a component count differs from the structure's n.
void require_compatible(const std::vector<VectorFunction>& family, const AffineStructure& a);

/// A linear map on the fiber space used inside conjugated operators.
struct FiberMap {
  enum class Kind { Shift, Permute, Dilate };
  Kind kind = Kind::Shift;
  long param = 0;  // shift amount s, or l for Dilate
};

/// Finitely supported operator on the n-fold sum of l2(Z).
class FiberOperator {
 public:
  struct Identity {};
  struct RankOne {
    Fiber f;  // P_f(v) = <v, f> f
  };
  struct Matrix {
    std::map<std::pair<FiberIndex, FiberIndex>, Complex> entries;  // (row, column)
  };
  struct Conjugated {
    std::shared_ptr<const FiberOperator> inner;
    AffineStructure structure;
    std::vector<FiberMap> maps;  // M = maps.back() o ... o maps.front(); operator is M* T M
  };

  static FiberOperator identity() { return FiberOperator(Identity{}); }
  static FiberOperator zero() { return FiberOperator(Matrix{}); }
  /// Throws InvalidArgument for the zero vector.
  static FiberOperator rank_one(Fiber f);
  static FiberOperator matrix(std::map<std::pair<FiberIndex, FiberIndex>, Complex> entries);
  /// P_{ki,lj} v = <v, delta_ki> delta_lj.
  static FiberOperator elementary(const FiberIndex& from, const FiberIndex& to);
  static FiberOperator conjugated(FiberOperator inner, AffineStructure structure,
                                  std::vector<FiberMap> maps);

  Fiber apply(const Fiber& v) const;
  /// <T v, v>
  Complex form(const Fiber& v) const;

  bool is_identity() const { return std::holds_alternative<Identity>(rep_); }
  const auto& representation() const { return rep_; }

 private:
  explicit FiberOperator(std::variant<Identity, RankOne, Matrix, Conjugated> rep)
      : rep_(std::move(rep)) {}
  std::variant<Identity, RankOne, Matrix, Conjugated> rep_;
};

Fiber apply_map(const AffineStructure& a, const FiberMap& m, const Fiber& v);
Fiber apply_map_adjoint(const AffineStructure& a, const FiberMap& m, const Fiber& v);

/// Entry (k, i) is phi_i^(xi - theta_i + 2k*pi). The k-range is derived from
/// the exact support of each component.
Fiber fiber(const VectorFunction& phi, const AffineStructure& a, const RationalPi& xi);

/// Points of [-pi, pi) where some fiber entry of the family can jump.
std::vector<RationalPi> fiber_breakpoints(const std::vector<VectorFunction>& family,
                                          const AffineStructure& a);
/// Cells of [lo, hi) on which every fiber of the family is constant.
std::vector<Cell> fiber_cells(const std::vector<VectorFunction>& family, const AffineStructure& a,
                              const RationalPi& lo, const RationalPi& hi);
/// All 2pi-translates of the given points inside (lo, hi), used as cell cuts.
std::vector<Cell> lattice_cells(const std::vector<RationalPi>& points_mod_2pi,
                                const RationalPi& lo, const RationalPi& hi);

/// Fourier side of the multiplier pi(f): component i becomes f(. + theta_i) * phi_i^.
VectorFunction apply_multiplier(const PeriodicStep& f, const VectorFunction& phi,
                                const AffineStructure& a);

/// NTF generator of U^{-1} S(Phi): for each phi and r = 0..N-1 the function with
/// component i = N^{-1/2} e^{-ir(xi/N + theta_j)} phi_j^(xi/N), j = sigma^{-1}(i).
std::vector<VectorFunction> inverse_dilate_generators(const std::vector<VectorFunction>& family,
                                                      const AffineStructure& a);

struct QuasiAffineGenerator {
  VectorFunction function;
  std::size_t source = 0;  // index into the input family
  long level = 0;
  long shift = 0;  // r
};

/// Truncated quasi-affine family: levels -max_level..0 (one generator each) and
/// 1..max_level (N^m generators each).
std::vector<QuasiAffineGenerator> quasi_affine_family(const std::vector<VectorFunction>& psis,
                                                      const AffineStructure& a, long max_level);
std::vector<VectorFunction> quasi_affine_generators(const std::vector<VectorFunction>& psis,
                                                    const AffineStructure& a, long max_level);

/// xi -> (psi^_{sigma^m(i)}(N^m xi))_i for m >= 0 (negative m uses sigma^{-|m|}).
VectorFunction dilated_generator(const VectorFunction& psi, const AffineStructure& a, long m);

struct FrameBounds {
  double lower = 0.0;  // smallest nonzero squared singular value
  double upper = 0.0;  // largest squared singular value
  int rank = 0;
};

inline constexpr double kDefaultRankTolerance = 1e-8;

/// Frame bounds of the fibers {T_per phi(xi)} for their span.
FrameBounds fiber_frame_bounds(const std::vector<Fiber>& fibers,
                               double rel_tol = kDefaultRankTolerance);
FrameBounds fiber_frame_bounds(const std::vector<VectorFunction>& family, const AffineStructure& a,
                               const RationalPi& xi, double rel_tol = kDefaultRankTolerance);

}  // namespace supertrace
