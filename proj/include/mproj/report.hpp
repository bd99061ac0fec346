#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mproj/degrees.hpp"
#include "mproj/exactla.hpp"

namespace mproj {

// Settings shared by every randomized campaign.
struct CampaignConfig {
  std::uint64_t seed = 0;
  std::size_t seeds = 20;
  std::uint64_t modulus = PrimeField::kDefaultModulus;
  unsigned threads = 0;
  // Seeds that must pass: ceil(seeds * pass_num / pass_den).
  std::size_t pass_num = 19;
  std::size_t pass_den = 20;

  std::size_t required() const { return (seeds * pass_num + pass_den - 1) / pass_den; }
  std::uint64_t seed_for(std::size_t run) const;
};

// One comparison of a closed formula with a computed dimension. `i` is
// 0-based here and 1-based in JSON.
struct FormulaRecord {
  MultiIndex a;
  std::size_t i = 0;
  std::int64_t formula = 0;
  std::int64_t computed = 0;
  bool hypothesis_ok = true;
  bool pass = true;
  std::optional<std::size_t> s;
  std::string note;
};

nlohmann::json to_json(const FormulaRecord& r);

struct SeedRun {
  std::uint64_t seed = 0;
  bool pass = true;
  // Degrees where the hypothesis holds.
  std::vector<FormulaRecord> records;
  // Degrees where it fails: logged with both values, never counted.
  std::vector<FormulaRecord> excluded;
  std::vector<std::string> failures;
  nlohmann::json extra = nlohmann::json::object();
};

struct VerificationReport {
  std::string verifier;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t modulus = PrimeField::kDefaultModulus;
  std::size_t required = 0;
  std::vector<SeedRun> runs;
  nlohmann::json extra = nlohmann::json::object();

  std::size_t passed() const;
  bool pass() const { return passed() >= required; }
};

nlohmann::json to_json(const VerificationReport& r);
// Human-readable summary: one line per seed and a verdict.
std::string to_text(const VerificationReport& r);

}  // namespace mproj
