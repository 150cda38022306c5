#include "postcon/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "postcon/csv.hpp"
#include "postcon/error.hpp"

namespace postcon {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("'" + key + "' must be a nonnegative integer, got '" + text + "'");
  }
  return v;
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const ValidationError&) {
    throw ValidationError("'" + key + "' must be a number, got '" + text + "'");
  }
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
    if (cfg.has(key)) throw ValidationError("config key '" + key + "' given twice");
    cfg.set(key, trim(std::string_view(t).substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse(in);
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::check_known(const std::set<std::string>& known) const {
  for (const auto& [k, v] : entries_) {
    if (!known.count(k)) throw ValidationError("unknown config key '" + k + "'");
  }
}

std::string Config::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ValidationError("missing config key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  return parse_number(key, get_string(key));
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key) const { return parse_u64(key, get_string(key)); }

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("'" + key + "' must be true or false, got '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(get_string(key), ',')) out.push_back(parse_number(key, item));
  return out;
}

std::vector<std::uint64_t> Config::get_u64s(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(get_string(key), ',')) out.push_back(parse_u64(key, item));
  return out;
}

FamilySpec family_from_config(const Config& cfg) {
  const std::string name = cfg.get_string("family", "cosine");
  if (name == "cosine") return FamilySpec::cosine();
  if (name == "extended_cosine") {
    return FamilySpec::extended_cosine(cfg.get_double("lambda"),
                                       cfg.get_double("mu", FamilySpec::kDefaultMu));
  }
  if (name == "uniform_scale") return FamilySpec::uniform_scale();
  if (name == "gauss_mixture") {
    std::vector<MixtureComponent> comps;
    for (const auto& part : split(cfg.get_string("mixture"), ';')) {
      const auto f = split(part, ':');
      if (f.size() != 3) throw ValidationError("mixture components are weight:mean:precision");
      comps.push_back({parse_number("mixture", f[0]), parse_number("mixture", f[1]),
                       parse_number("mixture", f[2])});
    }
    return FamilySpec::gauss_mixture(std::move(comps));
  }
  throw ValidationError("unknown family '" + name + "'");
}

PriorSpec parse_prior(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') {
    throw ValidationError("prior must look like name(arg,...), got '" + t + "'");
  }
  const std::string name = trim(std::string_view(t).substr(0, open));
  const auto args = split(std::string_view(t).substr(open + 1, t.size() - open - 2), ',');
  auto arity = [&](std::size_t n) {
    if (args.size() != n) {
      throw ValidationError("prior " + name + " takes " + std::to_string(n) + " arguments");
    }
  };
  auto num = [&](std::size_t i) { return parse_number("prior", args[i]); };
  if (name == "truncated_uniform") {
    arity(2);
    return PriorSpec::truncated_uniform(num(0), num(1));
  }
  if (name == "exponential") {
    arity(1);
    return PriorSpec::exponential(num(0));
  }
  if (name == "pareto_tail") {
    arity(2);
    return PriorSpec::pareto_tail(num(0), num(1));
  }
  if (name == "log_poly_tail") {
    arity(2);
    return PriorSpec::log_poly_tail(num(0), num(1));
  }
  if (name == "phi_tail") {
    arity(2);
    if (args[0] == "exp") return PriorSpec::phi_tail(PhiShape::Exponential, num(1));
    if (args[0] == "power") return PriorSpec::phi_tail(PhiShape::Power, num(1));
    throw ValidationError("phi_tail shape must be exp or power");
  }
  throw ValidationError("unknown prior '" + name + "'");
}

QuadratureConfig quadrature_from_config(const Config& cfg) {
  QuadratureConfig q;
  q.abs_tol = cfg.get_double("quad.abs_tol", q.abs_tol);
  q.rel_tol = cfg.get_double("quad.rel_tol", q.rel_tol);
  q.max_panels = cfg.get_u64("quad.max_panels", q.max_panels);
  q.oscillation_guard = cfg.get_u64("quad.oscillation_guard", q.oscillation_guard);
  q.validate();
  return q;
}

}  // namespace postcon
