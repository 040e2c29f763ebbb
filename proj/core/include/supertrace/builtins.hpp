#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "supertrace/characterization.hpp"

namespace supertrace {

/// chi on [-2pi, -pi) and [pi, 2pi).
StepSpectrum shannon_spectrum();
/// chi on [-pi, pi).
StepSpectrum shannon_scaling_spectrum();
/// chi on [-pi, -pi/2) and [pi/2, pi).
StepSpectrum half_shannon_spectrum();
/// {chi on +-[k pi, (k+1) pi) : k = 1..N-1}, an orthonormal wavelet set for scale N.
std::vector<StepSpectrum> nadic_shannon_family(long scale);

/// Named documents: "shannon", "shannon-scaling", "half-shannon". For shannon
/// and half-shannon with N > 2 the N-adic family (and its dilate by N) is used.
WaveletSystem builtin_system(std::string_view name, long scale = 2);
std::vector<std::string> builtin_names();

}  // namespace supertrace
