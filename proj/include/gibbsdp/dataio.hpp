#pragma once

#include <string>

#include "gibbsdp/sample.hpp"
#include "gibbsdp/zeta.hpp"

namespace gibbsdp {

struct ValidationReport {
  bool pass = false;
  long residual_k = 0;  // k - sum_l m_l
  long residual_n = 0;  // n - sum_l l * m_l
};

SampleSummary summarize(const RawSample& raw);

// Checks the two counting identities; never throws, datasets with
// discrepancies are reported as-is.
ValidationReport validate(const SampleSummary& s);

// Frequency-count CSV: header "l,m_l", one row per frequency.  Optional
// comment lines "# n=<int>" / "# k=<int>" override the totals derived from
// the rows (that is how inconsistent published datasets are transported).
SampleSummary read_frequency_csv(const std::string& path);
void write_frequency_csv(const std::string& path, const SampleSummary& s);

// One species label per line.
RawSample read_raw_sample(const std::string& path);

}  // namespace gibbsdp
