#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "helpers.hpp"
#include "supertrace/errors.hpp"

namespace supertrace {
namespace {

using testing::rp;
using testing::vec;

const AffineStructure kClassical = AffineStructure::classical();

WaveletSystem scalar_system(std::vector<StepSpectrum> psis, long scale = 2) {
  std::vector<VectorFunction> v;
  for (auto& p : psis) v.push_back(vec(std::move(p)));
  return WaveletSystem(AffineStructure::classical(scale), std::move(v));
}

WaveletSystem shannon_system() { return scalar_system({shannon_spectrum()}); }

WaveletSystem known_bad_system() {
  return WaveletSystem(AffineStructure::amplified(2),
                       {VectorFunction{{shannon_spectrum(), half_shannon_spectrum()}, "bad"}});
}

void expect_report_consistent(const CheckReport& r) {
  EXPECT_EQ(r.passed, r.max_residual <= r.tolerance);
  EXPECT_EQ(r.passed, !r.witness.has_value());
}

void expect_witness_cell_meets(const Witness& w, const RationalPi& lo, const RationalPi& hi) {
  ASSERT_TRUE(w.cell.has_value());
  EXPECT_LT(w.cell->first, hi);
  EXPECT_LT(lo, w.cell->second);
  EXPECT_LE(w.cell->first, w.xi);
  EXPECT_LT(w.xi, w.cell->second);
}

// Independent evaluation of both characterization equations at one point,
// summing over generous index ranges that cover every nonzero term.
struct BruteForce {
  double worst = 0.0;
};

BruteForce brute_force_equations(const std::vector<VectorFunction>& psis, const AffineStructure& a,
                                 const RationalPi& xi) {
  BruteForce out;
  const long big = 24;
  for (int i = 0; i < a.n; ++i) {
    for (int j = 0; j < a.n; ++j) {
      if (a.theta[i] == a.theta[j]) {
        Complex total{};
        for (const auto& psi : psis) {
          for (long m = -big; m <= big; ++m) {
            const RationalPi x = xi * rational_pow(a.scale, m);
            total += evaluate(psi.components[a.sigma_pow(i, m)], x) *
                     std::conj(evaluate(psi.components[a.sigma_pow(j, m)], x));
          }
        }
        out.worst = std::max(out.worst, std::abs(total - Complex(i == j ? 1.0 : 0.0, 0.0)));
      }
      const RationalPi c =
          (a.theta[a.sigma_inv(i)] - a.theta[a.sigma_inv(j)]) * Rational(a.scale);
      for (long s = -12; s <= 12; ++s) {
        if (s % a.scale == 0) continue;
        Complex total{};
        for (const auto& psi : psis) {
          for (long m = 0; m <= big; ++m) {
            const Rational p = rational_pow(a.scale, m);
            total += evaluate(psi.components[a.sigma_pow(i, m)], xi * p) *
                     std::conj(evaluate(psi.components[a.sigma_pow(j, m)],
                                        (xi + c + two_pi_times(s)) * p));
          }
        }
        out.worst = std::max(out.worst, std::abs(total));
      }
    }
  }
  return out;
}

// check_ntf_translates ----------------------------------------------------

TEST(CheckNtfTranslates, TruncatedTranslateFamilyPasses) {
  std::vector<VectorFunction> fam;
  for (long j = -3; j <= 3; ++j) fam.push_back(vec(indicator(rp(-1 + 2 * j), rp(1 + 2 * j))));
  const CheckReport r = check_ntf_translates(fam, kClassical, rp(-1), rp(1));
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.max_residual, 0.0);
  expect_report_consistent(r);
}

TEST(CheckNtfTranslates, SingleScalingFunctionPassesOnWindow) {
  const CheckReport r =
      check_ntf_translates({vec(shannon_scaling_spectrum())}, kClassical, rp(-1), rp(1));
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.notes.empty());
}

TEST(CheckNtfTranslates, ScaledGeneratorFails) {
  const CheckReport r = check_ntf_translates({vec(scale(shannon_scaling_spectrum(), {2.0, 0.0}))},
                                             kClassical, rp(-1), rp(1));
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->i, 0);
  EXPECT_EQ(r.witness->j, 0);
  EXPECT_EQ(r.witness->index_name, "k");
  EXPECT_EQ(r.witness->index, 0);
  EXPECT_EQ(r.witness->value, Complex(4.0, 0.0));
  expect_report_consistent(r);
}

TEST(CheckNtfTranslates, ModulatedInputNeedsGridMode) {
  const VectorFunction m = vec(make_step_spectrum({{rp(-1), rp(1), {1.0, 0.0}, Rational(1)}}));
  try {
    check_ntf_translates({m}, kClassical, rp(-1), rp(1));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModeUnsupported);
  }
  CheckOptions grid;
  grid.mode = Mode::Grid;
  grid.grid_points = 128;
  EXPECT_TRUE(check_ntf_translates({m}, kClassical, rp(-1), rp(1), grid).passed);
}

// check_super_wavelet -----------------------------------------------------

TEST(CheckSuperWavelet, ShannonPassesExactly) {
  WaveletSystem w = shannon_system();
  const CheckReport r = verify_wavelet_system(w);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.max_residual, 0.0);
  EXPECT_GE(r.cells_checked, 1);
  EXPECT_LT(r.cells_checked, 10000);
  EXPECT_EQ(static_cast<long>(r.samples.size()), r.cells_checked);
  EXPECT_EQ(w.tag(), SystemTag::VerifiedOrthonormal);
  expect_report_consistent(r);
}

TEST(CheckSuperWavelet, OversampledShannonPasses) {
  const WaveletSystem w = oversample({shannon_spectrum()}, 2, 3);
  const CheckReport r = check_super_wavelet(w);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_residual, kExactTolerance);
}

TEST(CheckSuperWavelet, KnownBadSystemWitness) {
  // At m = 0, xi in [pi, 2pi) and xi - 2pi in [-pi, -pi/2) overlap for xi in [pi, 3pi/2).
  const CheckReport r = check_super_wavelet(known_bad_system());
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->equation, "offset-sum");
  EXPECT_EQ(r.witness->i, 0);
  EXPECT_EQ(r.witness->j, 1);
  EXPECT_EQ(r.witness->index_name, "s");
  EXPECT_EQ(r.witness->index, -1);
  expect_witness_cell_meets(*r.witness, rp(1), rp(3, 2));
  expect_report_consistent(r);
}

TEST(CheckSuperWavelet, ZeroInnerRadiusNeedsGridMode) {
  const WaveletSystem w = scalar_system({shannon_scaling_spectrum()});
  try {
    check_super_wavelet(w);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroInnerRadius);
  }
  CheckOptions grid;
  grid.mode = Mode::Grid;
  grid.grid_points = 64;
  const CheckReport r = check_super_wavelet(w, grid);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.notes.empty());
}

TEST(CheckSuperWavelet, GridModeAgreesOnShannon) {
  CheckOptions grid;
  grid.mode = Mode::Grid;
  grid.grid_points = 256;
  const CheckReport r = check_super_wavelet(shannon_system(), grid);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.tolerance, kGridTolerance);
}

TEST(CheckSuperWavelet, AgreesWithBruteForceOracle) {
  std::mt19937_64 rng(51);
  const std::vector<WaveletSystem> systems{shannon_system(), oversample({shannon_spectrum()}, 2, 3),
                                           oversample({shannon_spectrum()}, 2, 5),
                                           oversample(nadic_shannon_family(3), 3, 2),
                                           known_bad_system()};
  for (const auto& w : systems) {
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const RationalPi xi = testing::random_point(rng, -4, 4);
      worst = std::max(worst, brute_force_equations(w.psis(), w.structure(), xi).worst);
    }
    const CheckReport r = check_super_wavelet(w);
    EXPECT_EQ(r.passed, worst <= kExactTolerance);
    EXPECT_LE(worst, r.max_residual + 1e-12);
  }
}

// check_wavelet_scalar ----------------------------------------------------

TEST(CheckWaveletScalar, Examples) {
  EXPECT_TRUE(check_wavelet_scalar({shannon_spectrum()}).passed);
  EXPECT_TRUE(check_wavelet_scalar({half_shannon_spectrum()}).passed);
  const CheckReport r = check_wavelet_scalar({indicator(rp(1), rp(2))});
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->equation, "scale-sum");
  EXPECT_LT(r.witness->xi, rp(0));
}

// check_strong_disjointness -----------------------------------------------

TEST(StrongDisjointness, ShannonAgainstHalfShannon) {
  const CheckReport r = check_strong_disjointness({shannon_spectrum()}, {half_shannon_spectrum()});
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->equation, "offset-sum-cross");
  EXPECT_EQ(r.witness->index, -1);
  expect_witness_cell_meets(*r.witness, rp(1), rp(3, 2));
  // Same witness as the two-component system.
  const CheckReport direct = check_super_wavelet(known_bad_system());
  EXPECT_EQ(r.witness->xi, direct.witness->xi);
  EXPECT_EQ(r.witness->cell, direct.witness->cell);
}

TEST(StrongDisjointness, ZeroPartnerPasses) {
  EXPECT_TRUE(check_strong_disjointness({shannon_spectrum()}, {StepSpectrum{}}).passed);
}

TEST(StrongDisjointness, SelfPairingFailsFirstSum) {
  const CheckReport r = check_strong_disjointness({shannon_spectrum()}, {shannon_spectrum()});
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->equation, "scale-sum-cross");
  EXPECT_EQ(r.witness->value, Complex(1.0, 0.0));
}

TEST(StrongDisjointness, CardinalityMismatch) {
  try {
    check_strong_disjointness({shannon_spectrum()}, {});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CardinalityMismatch);
  }
}

// Scaling spectral function and Gripenberg-Weiss ---------------------------

TEST(ScalingSpectral, ShannonValues) {
  const WaveletSystem w = shannon_system();
  const RationalPi eps(1, 1024);
  const ScalingSpectral s = scaling_spectral_function(w, 0, rp(-2), rp(2), eps);
  EXPECT_EQ(s.value(rp(1, 2)), Complex(1.0, 0.0));   // m = 1 maps pi/2 to pi
  EXPECT_EQ(s.value(rp(3, 2)), Complex(0.0, 0.0));   // 2^m * 3pi/2 never in [pi, 2pi)
  EXPECT_EQ(s.value(rp(-1, 3)), Complex(1.0, 0.0));
  EXPECT_EQ(s.excluded_measure, make_rational(1, 512));
  EXPECT_TRUE(s.unverified);
}

TEST(ScalingSpectral, EscapeBeyondOuterRadius) {
  WaveletSystem w = oversample({shannon_spectrum()}, 2, 3);
  verify_wavelet_system(w);
  for (int i = 0; i < 3; ++i) {
    const RationalPi t = w.structure().theta[i];
    const ScalingSpectral s = scaling_spectral_function(w, i, t + rp(1, 3), t + rp(1), rp(1, 1024));
    // N * |xi - theta_i| > R = 2/3 for xi - theta_i >= 1/3: no m >= 1 contributes.
    EXPECT_TRUE(s.value.is_zero());
    EXPECT_FALSE(s.unverified);
  }
}

TEST(ScalingSpectral, WindowTouchingAccumulationPoint) {
  try {
    scaling_spectral_function(shannon_system(), 0, rp(-1), rp(1), rp(0));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowTouchesAccumulationPoint);
  }
}

TEST(GripenbergWeiss, Examples) {
  const RationalPi lo(-1023, 1024), hi(1023, 1024), eps(1, 1024);
  const CheckReport ok =
      gripenberg_weiss_residual(shannon_system(), {vec(shannon_scaling_spectrum())}, lo, hi, eps);
  EXPECT_TRUE(ok.passed);
  EXPECT_EQ(ok.max_residual, 0.0);
  const CheckReport half =
      gripenberg_weiss_residual(shannon_system(), {vec(indicator(rp(0), rp(1)))}, lo, hi, eps);
  EXPECT_FALSE(half.passed);
  ASSERT_TRUE(half.witness);
  EXPECT_LT(half.witness->xi, rp(0));
  const WaveletSystem zero = scalar_system({StepSpectrum{}});
  EXPECT_TRUE(gripenberg_weiss_residual(zero, {vec(StepSpectrum{})}, lo, hi, eps).passed);
}

// Dimension function and lower bound probe ---------------------------------

TEST(WaveletDimension, ShannonIsOne) {
  for (const auto& d : wavelet_dimension_function(shannon_system(), seeded_points(rp(-1), rp(1), 128, 9))) {
    EXPECT_NEAR(d.value, 1.0, 1e-12);
    EXPECT_EQ(d.rank, 1);
  }
}

TEST(WaveletDimension, OversampledValuesAreRanks) {
  WaveletSystem w = oversample({shannon_spectrum()}, 2, 3);
  ASSERT_TRUE(verify_wavelet_system(w).passed);
  for (const auto& d : wavelet_dimension_function(w, seeded_points(rp(-1), rp(1), 128, 10))) {
    EXPECT_NEAR(d.value, std::round(d.value), 1e-9);
    EXPECT_GE(d.value, -1e-9);
    EXPECT_EQ(std::lround(d.value), d.rank);
  }
}

TEST(WaveletDimension, ZeroSystem) {
  for (const auto& d : wavelet_dimension_function(scalar_system({StepSpectrum{}}),
                                                  seeded_points(rp(-1), rp(1), 16, 11))) {
    EXPECT_EQ(d.value, 0.0);
    EXPECT_EQ(d.rank, 0);
  }
}

TEST(LowerBoundProbe, Examples) {
  WaveletSystem s = shannon_system();
  verify_wavelet_system(s);
  const LowerBoundProbe a = lower_bound_probe(s, rp(0), rp(1, 2), 8);
  EXPECT_EQ(a.cardinality, 1);
  EXPECT_TRUE(a.passed);
  EXPECT_FALSE(a.hypothesis_unmet);
  for (double v : a.values) EXPECT_NEAR(v, 1.0, 1e-12);

  WaveletSystem eta = oversample({shannon_spectrum()}, 2, 3);
  verify_wavelet_system(eta);
  const LowerBoundProbe b = lower_bound_probe(eta, rp(0), rp(1, 2), 8);
  EXPECT_EQ(b.cardinality, 1);
  EXPECT_TRUE(b.passed);

  const WaveletSystem bad = known_bad_system();
  const LowerBoundProbe c = lower_bound_probe(bad, rp(0), rp(1, 2), 4);
  EXPECT_TRUE(c.hypothesis_unmet);
  EXPECT_EQ(c.cardinality, 2);
}

// Oversampling -------------------------------------------------------------

TEST(Oversample, ShannonTwoThree) {
  const WaveletSystem w = oversample({shannon_spectrum()}, 2, 3);
  ASSERT_EQ(w.psis().size(), 1u);
  const StepSpectrum want = make_step_spectrum({{rp(-2, 3), rp(-1, 3)}, {rp(1, 3), rp(2, 3)}});
  for (const auto& c : w.psis()[0].components) EXPECT_EQ(c, want);
  // 3 * (1/2pi) * (2pi/3)
  EXPECT_EQ(l2_norm_sq_exact(w.psis()[0]), Rational(1));
  EXPECT_EQ(w.structure(), build_oversampling_structure(2, 3));
}

TEST(Oversample, IdentityAndNotCoprime) {
  const WaveletSystem w = oversample({shannon_spectrum()}, 2, 1);
  EXPECT_EQ(w.structure(), kClassical);
  EXPECT_EQ(w.psis()[0].components[0], shannon_spectrum());
  try {
    oversample({shannon_spectrum()}, 2, 2);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCoprime);
  }
}

TEST(OffsetSet, Examples) {
  EXPECT_TRUE(offset_set_check(2, 3, 50).passed);
  EXPECT_TRUE(offset_set_check(3, 5, 50).passed);
  try {
    offset_set_check(2, 2, 50);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCoprime);
  }
}

TEST(OffsetSet, MatchesDirectEnumeration) {
  for (auto [scale, p] : {std::pair{2L, 3L}, {3L, 5L}, {4L, 7L}, {5L, 2L}}) {
    const long bound = 30;
    // q not in NZ iff q = N l + p s with |l| <= p - 1, s not in NZ; s is searched widely.
    bool ok = true;
    for (long q = -bound; q <= bound; ++q) {
      bool found = false;
      for (long l = -(p - 1); l <= p - 1 && !found; ++l) {
        const long rest = q - scale * l;
        if (rest % p == 0 && (rest / p) % scale != 0) found = true;
      }
      ok = ok && (found == (q % scale != 0));
    }
    EXPECT_TRUE(ok);
    EXPECT_EQ(offset_set_check(scale, p, bound).passed, ok);
  }
}

// Properties ---------------------------------------------------------------

std::vector<std::pair<long, long>> oversampling_pairs() { return {{2, 3}, {2, 5}, {3, 2}}; }

TEST(CharacterizationProperties, OversamplingRefinesScalarWavelets) {
  for (auto [scale, p] : oversampling_pairs()) {
    const std::vector<StepSpectrum> shannon = nadic_shannon_family(scale);
    std::vector<StepSpectrum> half;
    for (const auto& s : shannon) half.push_back(dilate_arg(s, Rational(scale)));
    for (const auto& family : {shannon, half}) {
      ASSERT_TRUE(check_wavelet_scalar(family, scale).passed);
      EXPECT_TRUE(check_super_wavelet(oversample(family, scale, p)).passed) << scale << " " << p;
      std::vector<StepSpectrum> eta;
      for (const auto& s : family) eta.push_back(dilate_arg(s, Rational(p)));
      EXPECT_TRUE(check_wavelet_scalar(eta, scale).passed) << scale << " " << p;
    }
  }
}

TEST(CharacterizationProperties, OversamplingPreservesNorms) {
  std::mt19937_64 rng(52);
  for (auto [scale, p] : oversampling_pairs()) {
    for (int t = 0; t < 10; ++t) {
      const StepSpectrum s = testing::random_spectrum(rng);
      const WaveletSystem w = oversample({s}, scale, p);
      EXPECT_EQ(l2_norm_sq_exact(w.psis()[0]), l2_norm_sq_exact(s));
    }
  }
}

TEST(CharacterizationProperties, SkippedPairsAreRedundant) {
  CheckOptions all;
  all.all_pairs = true;
  for (const auto& w : {shannon_system(), oversample({shannon_spectrum()}, 2, 3),
                        oversample({shannon_spectrum()}, 2, 5), known_bad_system()}) {
    const CheckReport half = check_super_wavelet(w);
    const CheckReport full = check_super_wavelet(w, all);
    EXPECT_EQ(half.passed, full.passed);
    EXPECT_NEAR(half.max_residual, full.max_residual, 1e-12);
  }
}

TEST(CharacterizationProperties, DimensionIsIntegerOnVerifiedSystems) {
  for (auto [scale, p] : oversampling_pairs()) {
    WaveletSystem w = oversample(nadic_shannon_family(scale), scale, p);
    ASSERT_TRUE(verify_wavelet_system(w).passed);
    for (const auto& d : wavelet_dimension_function(w, seeded_points(rp(-1), rp(1), 64, 12))) {
      EXPECT_NEAR(d.value, std::round(d.value), 1e-9);
      EXPECT_GE(std::lround(d.value), 0);
    }
  }
}

TEST(CharacterizationProperties, InvariantUnderRelabelingAndPhases) {
  const std::vector<StepSpectrum> fam = nadic_shannon_family(3);
  WaveletSystem w = oversample(fam, 3, 2);
  const CheckReport base = check_super_wavelet(w);
  ASSERT_TRUE(base.passed);
  std::vector<VectorFunction> psis = w.psis();
  std::reverse(psis.begin(), psis.end());
  const Complex phase = std::polar(1.0, 0.7);
  for (auto& c : psis[0].components) c = scale(c, phase);
  const CheckReport moved = check_super_wavelet(WaveletSystem(w.structure(), psis));
  EXPECT_TRUE(moved.passed);
  EXPECT_NEAR(moved.max_residual, base.max_residual, 1e-12);
}

}  // namespace
}  // namespace supertrace
