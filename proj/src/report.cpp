#include "oscml/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace oscml {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvDocument::str() const {
  std::ostringstream os;
  for (const auto& [k, v] : config) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
    os << "\n";
  }
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

CsvDocument parse_csv(const std::string& text) {
  CsvDocument doc;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      std::size_t eq = body.find('=');
      if (eq != std::string::npos)
        doc.config[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      for (auto& c : split(line, ',')) doc.columns.push_back(trim(c));
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    for (auto& c : split(line, ',')) row.push_back(std::stod(c));
    if (row.size() != doc.columns.size()) throw std::runtime_error("ragged CSV row");
    doc.rows.push_back(row);
  }
  return doc;
}

CsvDocument sweep_csv(const DecayReport& rep, const std::map<std::string, std::string>& config) {
  CsvDocument doc;
  doc.config = config;
  doc.config["h"] = rat_str(rep.h_used);
  doc.config["m"] = std::to_string(rep.m_used);
  doc.config["samples_excluded"] = std::to_string(rep.excluded);
  if (rep.fit_done) {
    doc.config["fitted_p"] = fmt17(rep.fit.p);
    doc.config["fitted_q"] = fmt17(rep.fit.q);
  }
  doc.columns = {"lambda", "abs_value", "error_estimate", "ratio"};
  for (const auto& s : rep.samples)
    if (s.tolerance_met)
      doc.rows.push_back({s.lambda, s.abs_value, s.error_estimate, s.ratio});
  return doc;
}

CsvDocument sublevel_csv(const SublevelReport& rep,
                         const std::map<std::string, std::string>& config) {
  CsvDocument doc;
  doc.config = config;
  if (rep.fit_done) {
    doc.config["fitted_delta"] = fmt17(rep.fitted_delta);
    doc.config["fitted_logpow"] = fmt17(rep.fitted_logpow);
  }
  doc.columns = {"epsilon", "measure", "measure_error"};
  for (const auto& s : rep.samples)
    doc.rows.push_back({s.epsilon, s.measure, s.measure_error});
  return doc;
}

Verdict verdict_from_sweep_csv(const CsvDocument& doc) {
  if (doc.columns != std::vector<std::string>{"lambda", "abs_value", "error_estimate", "ratio"})
    throw std::runtime_error("not a sweep CSV");
  DecayReport rep;
  auto hit = doc.config.find("h");
  auto mit = doc.config.find("m");
  if (hit == doc.config.end() || mit == doc.config.end())
    throw std::runtime_error("sweep CSV missing h/m config");
  rep.h_used = Rational(hit->second);
  rep.m_used = std::stoi(mit->second);
  rep.branch_h1 = (rep.h_used == 1);
  auto xit = doc.config.find("samples_excluded");
  rep.excluded = xit == doc.config.end() ? 0 : std::stoi(xit->second);
  for (const auto& row : doc.rows) {
    DecaySample s;
    s.lambda = row[0];
    s.abs_value = row[1];
    s.error_estimate = row[2];
    s.ratio = row[3];
    s.tolerance_met = true;
    rep.samples.push_back(s);
    rep.bound_ratio_max = std::max(rep.bound_ratio_max, s.ratio);
  }
  return verify_theorem1(rep);
}

Verdict verdict_from_sublevel_csv(const CsvDocument& doc) {
  if (doc.columns != std::vector<std::string>{"epsilon", "measure", "measure_error"})
    throw std::runtime_error("not a sublevel CSV");
  auto dit = doc.config.find("delta");
  if (dit == doc.config.end()) throw std::runtime_error("sublevel CSV missing delta config");
  Rational delta(dit->second);
  Verdict v;
  v.kv.emplace_back("delta", rat_str(delta));
  if (delta < 1)
    v.kv.emplace_back("regime", "delta<1");
  else if (delta == 1)
    v.kv.emplace_back("regime", "delta=1");
  else
    v.kv.emplace_back("regime", "delta>1");
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : doc.rows)
    if (row[1] > 0.0 && row[0] < 0.5) pts.emplace_back(1.0 / row[0], row[1]);
  v.kv.emplace_back("fit_samples", std::to_string(pts.size()));
  if (pts.size() < 8) {
    v.kv.emplace_back("note", "fit refused: fewer than 8 usable samples");
    v.pass = false;
    return v;
  }
  FitResult fit = fit_decay(pts);
  v.kv.emplace_back("fitted_delta", fmt17(fit.p));
  v.kv.emplace_back("fitted_logpow", fmt17(fit.q));
  v.kv.emplace_back("fit_residual", fmt17(fit.residual));
  // delta > 1 means the measure decays at least linearly; otherwise the
  // fitted exponent should match delta itself.
  double expected = to_double(delta);
  v.pass = delta > 1 ? fit.p >= 0.9 : std::abs(fit.p - expected) <= 0.1;
  return v;
}

}  // namespace oscml
