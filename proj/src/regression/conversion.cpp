#include "sslm/regression/conversion.hpp"

namespace sslm {

std::map<LmmVariant, LmmFit> fit_conversion_suite(const FeatureTable& fillers,
                                                  const FitOptions& base_opts) {
  std::map<LmmVariant, LmmFit> fits;

  auto fit_variant = [&](LmmVariant variant,
                         const std::vector<const LmmFit*>& nested_in) {
    DesignMatrix dm = build_design(fillers, variant);
    FitOptions opts = base_opts;
    for (const LmmFit* inner : nested_in)
      opts.ml_warm_starts.push_back(inner->theta_ml);
    LmmFit fit = fit_lmm(dm, opts);
    fit.scaling = fillers.scaling;
    fits.emplace(variant, std::move(fit));
  };

  fit_variant(LmmVariant::NEITHER, {});
  fit_variant(LmmVariant::LEXICAL, {&fits.at(LmmVariant::NEITHER)});
  fit_variant(LmmVariant::SYNTACTIC, {&fits.at(LmmVariant::NEITHER)});
  fit_variant(LmmVariant::BOTH,
              {&fits.at(LmmVariant::LEXICAL), &fits.at(LmmVariant::SYNTACTIC)});
  return fits;
}

}  // namespace sslm
