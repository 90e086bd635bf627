#pragma once

#include <vector>

#include "sslm/corpus/frequency.hpp"
#include "sslm/surprisal/engine.hpp"

namespace sslm {

struct CorrelationResult {
  double r = 0.0;
  double t = 0.0;
  double p = 1.0;  // two-sided
  long n = 0;
};

// Pearson correlation with t = r * sqrt((n-2) / (1-r^2)) and a two-sided p
// from the t reference distribution. Errors on fewer than 3 points or zero
// variance in either variable.
CorrelationResult pearson_correlation(const std::vector<double>& x,
                                      const std::vector<double>& y);

struct CorrelationReport {
  CorrelationResult syn_vs_lex;
  CorrelationResult syn_vs_logfreq;
};

CorrelationReport correlation_report(const std::vector<SurprisalRecord>& filler_records,
                                     const FrequencyTable& freq, const Vocabulary& vocab);

}  // namespace sslm
