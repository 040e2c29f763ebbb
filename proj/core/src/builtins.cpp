#include "supertrace/builtins.hpp"

#include "supertrace/errors.hpp"

namespace supertrace {

namespace {

StepSpectrum symmetric_band(const RationalPi& a, const RationalPi& b) {
  return make_step_spectrum({RawPiece{-b, -a}, RawPiece{a, b}});
}

VectorFunction scalar(StepSpectrum s, std::string label) {
  VectorFunction v;
  v.components.push_back(std::move(s));
  v.label = std::move(label);
  return v;
}

}  // namespace

StepSpectrum shannon_spectrum() { return symmetric_band(RationalPi(1, 1), RationalPi(2, 1)); }

StepSpectrum shannon_scaling_spectrum() { return indicator(RationalPi(-1, 1), RationalPi(1, 1)); }

StepSpectrum half_shannon_spectrum() { return symmetric_band(RationalPi(1, 2), RationalPi(1, 1)); }

std::vector<StepSpectrum> nadic_shannon_family(long scale) {
  if (scale < 2) fail(ErrorCode::InvalidArgument, "scale must be >= 2");
  std::vector<StepSpectrum> out;
  for (long k = 1; k < scale; ++k) out.push_back(symmetric_band(RationalPi(k, 1), RationalPi(k + 1, 1)));
  return out;
}

WaveletSystem builtin_system(std::string_view name, long scale) {
  const AffineStructure a = AffineStructure::classical(scale);
  std::vector<VectorFunction> psis;
  if (name == "shannon" || name == "half-shannon") {
    const bool half = name == "half-shannon";
    const auto family = nadic_shannon_family(scale);
    for (std::size_t l = 0; l < family.size(); ++l) {
      std::string label = std::string(name);
      if (family.size() > 1) label += std::to_string(l + 1);
      psis.push_back(scalar(half ? dilate_arg(family[l], Rational(scale)) : family[l], label));
    }
  } else if (name == "shannon-scaling") {
    psis.push_back(scalar(shannon_scaling_spectrum(), "shannon-scaling"));
  } else {
    fail(ErrorCode::InvalidArgument, "unknown builtin '" + std::string(name) + "'");
  }
  return WaveletSystem(a, std::move(psis));
}

std::vector<std::string> builtin_names() { return {"shannon", "shannon-scaling", "half-shannon"}; }

}  // namespace supertrace
