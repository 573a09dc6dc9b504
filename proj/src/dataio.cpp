#include "gibbsdp/dataio.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace gibbsdp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("dataio: cannot parse integer '" + s + "' in " + context);
  }
}

}  // namespace

SampleSummary summarize(const RawSample& raw) {
  if (raw.labels.empty()) throw std::domain_error("summarize: empty sample");
  std::unordered_map<std::string, long> counts;
  for (const auto& lab : raw.labels) ++counts[lab];
  SampleSummary s;
  s.n = long(raw.labels.size());
  s.k = long(counts.size());
  for (const auto& [lab, c] : counts) s.m[c] += 1;
  return s;
}

ValidationReport validate(const SampleSummary& s) {
  long sum_m = 0, sum_lm = 0;
  for (const auto& [l, ml] : s.m) {
    sum_m += ml;
    sum_lm += l * ml;
  }
  ValidationReport rep;
  rep.residual_k = s.k - sum_m;
  rep.residual_n = s.n - sum_lm;
  rep.pass = rep.residual_k == 0 && rep.residual_n == 0;
  return rep;
}

SampleSummary read_frequency_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataio: cannot open '" + path + "'");
  SampleSummary s;
  bool have_n = false, have_k = false;
  bool header_seen = false;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        const std::string key = trim(body.substr(0, eq));
        const std::string val = trim(body.substr(eq + 1));
        if (key == "n") {
          s.n = parse_long(val, path);
          have_n = true;
        } else if (key == "k") {
          s.k = parse_long(val, path);
          have_k = true;
        }
      }
      continue;
    }
    if (!header_seen) {
      if (trim(t) != "l,m_l")
        throw std::runtime_error("dataio: expected header 'l,m_l' in '" + path + "'");
      header_seen = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("dataio: malformed row at line " + std::to_string(line_no) +
                               " of '" + path + "'");
    const long l = parse_long(trim(t.substr(0, comma)), path);
    const long ml = parse_long(trim(t.substr(comma + 1)), path);
    if (l < 1 || ml < 0)
      throw std::runtime_error("dataio: invalid frequency row at line " +
                               std::to_string(line_no) + " of '" + path + "'");
    s.m[l] += ml;
  }
  if (!header_seen) throw std::runtime_error("dataio: no header in '" + path + "'");
  long sum_m = 0, sum_lm = 0;
  for (const auto& [l, ml] : s.m) {
    sum_m += ml;
    sum_lm += l * ml;
  }
  if (!have_k) s.k = sum_m;
  if (!have_n) s.n = sum_lm;
  return s;
}

void write_frequency_csv(const std::string& path, const SampleSummary& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataio: cannot write '" + path + "'");
  out << "# n=" << s.n << "\n# k=" << s.k << "\nl,m_l\n";
  for (const auto& [l, ml] : s.m) out << l << "," << ml << "\n";
  if (!out) throw std::runtime_error("dataio: write failed for '" + path + "'");
}

RawSample read_raw_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataio: cannot open '" + path + "'");
  RawSample raw;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (!t.empty()) raw.labels.push_back(t);
  }
  if (raw.labels.empty()) throw std::runtime_error("dataio: no labels in '" + path + "'");
  return raw;
}

}  // namespace gibbsdp
