// CSV emission and re-reading.  Every file starts with '# key = value'
// comment lines echoing the resolved configuration, so runs are
// self-describing and verdicts can be recomputed from the file alone.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "oscml/decay.hpp"

namespace oscml {

// 17 significant digits, shortest round-trip not required.
std::string fmt17(double v);

struct CsvDocument {
  std::map<std::string, std::string> config;  // header comments
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

CsvDocument parse_csv(const std::string& text);

CsvDocument sweep_csv(const DecayReport& rep, const std::map<std::string, std::string>& config);
CsvDocument sublevel_csv(const SublevelReport& rep,
                         const std::map<std::string, std::string>& config);

// Recompute the theorem-1 verdict from a sweep CSV written by sweep_csv.
Verdict verdict_from_sweep_csv(const CsvDocument& doc);

// Recompute the sublevel-trichotomy verdict from a CSV written by
// sublevel_csv; the expected delta and m come from the config header.
Verdict verdict_from_sublevel_csv(const CsvDocument& doc);

}  // namespace oscml
