#pragma once

#include <map>
#include <stdexcept>
#include <vector>

namespace gibbsdp {

// Frequency-count view of a species sample: n observations, k distinct
// species, and m[l] = number of species observed exactly l times.  The
// consistency identities sum_l m_l = k and sum_l l*m_l = n are NOT enforced
// here; real datasets ship with discrepancies, so checking is the data
// module's validate() job.
struct SampleSummary {
  long n = 0;
  long k = 0;
  std::map<long, long> m;

  long count(long l) const {
    auto it = m.find(l);
    return it == m.end() ? 0 : it->second;
  }

  // Build from per-species abundances; n and k are derived.
  static SampleSummary from_counts(const std::vector<long>& species_counts) {
    SampleSummary s;
    for (long c : species_counts) {
      if (c < 1) throw std::domain_error("SampleSummary::from_counts: counts must be >= 1");
      s.n += c;
      s.k += 1;
      s.m[c] += 1;
    }
    return s;
  }
};

}  // namespace gibbsdp
