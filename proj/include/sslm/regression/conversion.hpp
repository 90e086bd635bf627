#pragma once

#include <map>

#include "sslm/regression/lmm.hpp"

namespace sslm {

// The four surprisal-to-reading-time conversion models, fitted on the same
// filler rows with shared scaling constants. ML criteria are polished with
// warm starts along the nesting chain (neither < lexical/syntactic < both)
// so the maximized log-likelihoods respect model nesting up to numerical
// tolerance. Any member failing to fit aborts the suite.
std::map<LmmVariant, LmmFit> fit_conversion_suite(const FeatureTable& fillers,
                                                  const FitOptions& base_opts = {});

}  // namespace sslm
