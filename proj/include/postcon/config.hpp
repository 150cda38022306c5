#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "postcon/model.hpp"
#include "postcon/prior.hpp"
#include "postcon/quadrature.hpp"

namespace postcon {

/// Flat `key = value` settings. Blank lines and lines starting with '#' are
/// ignored; keys may not repeat within one file.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  /// Throws ValidationError naming the first key outside `known`.
  void check_known(const std::set<std::string>& known) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list.
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::uint64_t> get_u64s(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// family = cosine | extended_cosine | uniform_scale | gauss_mixture, with
/// `lambda`, `mu` for extended_cosine and
/// `mixture = w:mean:precision;w:mean:precision;...` for gauss_mixture.
FamilySpec family_from_config(const Config& cfg);
inline const std::set<std::string> kFamilyKeys{"family", "lambda", "mu", "mixture"};

/// prior = truncated_uniform(a,b) | exponential(rate) | pareto_tail(alpha,scale)
///       | log_poly_tail(beta,scale) | phi_tail(exp|power,beta)
PriorSpec parse_prior(const std::string& text);

/// quad.abs_tol, quad.rel_tol, quad.max_panels, quad.oscillation_guard.
QuadratureConfig quadrature_from_config(const Config& cfg);
inline const std::set<std::string> kQuadratureKeys{"quad.abs_tol", "quad.rel_tol",
                                                   "quad.max_panels", "quad.oscillation_guard"};

}  // namespace postcon
