#include "mproj/report.hpp"

#include <sstream>

#include "mproj/rng.hpp"

namespace mproj {

std::uint64_t CampaignConfig::seed_for(std::size_t run) const { return derive_seed(seed, run); }

nlohmann::json to_json(const FormulaRecord& r) {
  nlohmann::json j;
  j["a"] = r.a.entries();
  j["i"] = r.i + 1;
  if (r.s) j["s"] = *r.s;
  j["formula"] = r.formula;
  j["computed"] = r.computed;
  j["hypothesis_ok"] = r.hypothesis_ok;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::size_t VerificationReport::passed() const {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.pass ? 1 : 0;
  return n;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json runs = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& s : r.runs) {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& x : s.records) recs.push_back(to_json(x));
    nlohmann::json exc = nlohmann::json::array();
    for (const auto& x : s.excluded) exc.push_back(to_json(x));
    nlohmann::json jr{{"seed", s.seed}, {"pass", s.pass}, {"records", recs}, {"hypothesis_failures", exc}};
    if (!s.failures.empty()) jr["failures"] = s.failures;
    if (!s.extra.empty()) jr["extra"] = s.extra;
    runs.push_back(std::move(jr));
    if (!s.pass) {
      nlohmann::json f{{"seed", s.seed}, {"messages", s.failures}};
      nlohmann::json bad = nlohmann::json::array();
      for (const auto& x : s.records)
        if (!x.pass) bad.push_back(to_json(x));
      f["records"] = bad;
      failures.push_back(std::move(f));
    }
  }
  nlohmann::json j;
  j["verifier"] = r.verifier;
  j["params"] = r.params;
  j["modulus"] = r.modulus;
  j["seeds_total"] = r.runs.size();
  j["seeds_passed"] = r.passed();
  j["seeds_required"] = r.required;
  j["pass"] = r.pass();
  if (!r.extra.empty()) for (auto it = r.extra.begin(); it != r.extra.end(); ++it) j[it.key()] = it.value();
  j["failures"] = failures;
  j["runs"] = runs;
  return j;
}

std::string to_text(const VerificationReport& r) {
  std::ostringstream os;
  os << "verifier " << r.verifier << " " << r.params.dump() << "\n";
  for (const auto& s : r.runs) {
    std::size_t ok = 0;
    for (const auto& x : s.records) ok += x.pass ? 1 : 0;
    os << "  seed " << s.seed << ": " << (s.pass ? "pass" : "FAIL") << "  records " << ok << "/" << s.records.size()
       << "  hypothesis failures " << s.excluded.size() << "\n";
    for (const auto& m : s.failures) os << "    " << m << "\n";
  }
  os << (r.pass() ? "PASS" : "FAIL") << " " << r.passed() << "/" << r.runs.size() << " seeds (need " << r.required
     << ")\n";
  return os.str();
}

}  // namespace mproj
