#include "fluxlab/config.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fluxlab/error.hpp"
#include "json.hpp"

namespace fluxlab {

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::Identities:
      return "identities";
    case Experiment::CheckTheorem:
      return "check-theorem";
    case Experiment::GroundEnergy:
      return "ground-energy";
    case Experiment::Correlations:
      return "correlations";
    case Experiment::OrbitAverage:
      return "orbit-average";
    case Experiment::String:
      return "string";
    case Experiment::Anneal:
      return "anneal";
    case Experiment::Spectrum:
      return "spectrum";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : kAllExperiments)
    if (to_string(e) == name) return e;
  throw Error(ErrorKind::ConstraintViolation, "run.experiment: unknown experiment '" + std::string(name) + "'");
}

namespace {

struct Problem {
  ErrorKind kind;
  std::string text;
};

// Thrown by value converters; the caller prefixes the key.
struct BadValue {
  std::string why;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

template <class T>
T number(const std::string& raw) {
  const std::string s = trim(raw);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw BadValue{"cannot parse '" + s + "' as a number"};
  return v;
}

bool boolean(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw BadValue{"cannot parse '" + s + "' as a boolean"};
}

std::vector<double> doubles(const std::string& s) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) out.push_back(number<double>(part));
  return out;
}

std::vector<SitePair> pairs(const std::string& s) {
  std::vector<SitePair> out;
  for (const std::string& part : split(s, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) throw BadValue{"pair '" + part + "' is not of the form x-y"};
    out.emplace_back(number<int>(part.substr(0, dash)), number<int>(part.substr(dash + 1)));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"model.d", [](RunConfig& c, const std::string& v) { c.d = number<int>(v); }},
      {"model.L", [](RunConfig& c, const std::string& v) { c.L = number<int>(v); }},
      {"model.kappa", [](RunConfig& c, const std::string& v) { c.model.kappa = number<double>(v); }},
      {"model.g", [](RunConfig& c, const std::string& v) { c.model.g = number<double>(v); }},
      {"model.K", [](RunConfig& c, const std::string& v) { c.model.K = number<double>(v); }},
      {"run.experiment",
       [](RunConfig& c, const std::string& v) {
         try {
           c.experiment = parse_experiment(trim(v));
         } catch (const Error&) {
           throw BadValue{"unknown experiment '" + trim(v) + "'"};
         }
       }},
      {"run.seed", [](RunConfig& c, const std::string& v) { c.seed = number<std::uint64_t>(v); }},
      {"run.threads", [](RunConfig& c, const std::string& v) { c.threads = number<int>(v); }},
      {"run.out", [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); }},
      {"run.betas", [](RunConfig& c, const std::string& v) { c.betas = doubles(v); }},
      {"run.samples", [](RunConfig& c, const std::string& v) { c.samples = number<int>(v); }},
      {"identities.seeds", [](RunConfig& c, const std::string& v) { c.identity_seeds = number<int>(v); }},
      {"identities.kappa", [](RunConfig& c, const std::string& v) { c.identity_kappas = doubles(v); }},
      {"identities.g", [](RunConfig& c, const std::string& v) { c.identity_gs = doubles(v); }},
      {"correlations.fields", [](RunConfig& c, const std::string& v) { c.correlation_fields = number<int>(v); }},
      {"correlations.pairs", [](RunConfig& c, const std::string& v) { c.correlation_pairs = pairs(v); }},
      {"orbit.x", [](RunConfig& c, const std::string& v) { c.orbit_x = number<int>(v); }},
      {"orbit.y", [](RunConfig& c, const std::string& v) { c.orbit_y = number<int>(v); }},
      {"orbit.samples", [](RunConfig& c, const std::string& v) { c.orbit_samples = number<int>(v); }},
      {"orbit.direct", [](RunConfig& c, const std::string& v) { c.orbit_direct = number<int>(v); }},
      {"string.pairs", [](RunConfig& c, const std::string& v) { c.string_pairs = pairs(v); }},
      {"anneal.beta", [](RunConfig& c, const std::string& v) { c.anneal.beta_physical = number<double>(v); }},
      {"anneal.t_initial", [](RunConfig& c, const std::string& v) { c.anneal.t_initial = number<double>(v); }},
      {"anneal.t_final", [](RunConfig& c, const std::string& v) { c.anneal.t_final = number<double>(v); }},
      {"anneal.cooling", [](RunConfig& c, const std::string& v) { c.anneal.cooling = number<double>(v); }},
      {"anneal.sweeps_per_temp", [](RunConfig& c, const std::string& v) { c.anneal.sweeps_per_temp = number<int>(v); }},
      {"anneal.proposal_width", [](RunConfig& c, const std::string& v) { c.anneal.proposal_width = number<double>(v); }},
      {"anneal.restarts", [](RunConfig& c, const std::string& v) { c.anneal.restarts = number<int>(v); }},
      {"anneal.converge_tolerance",
       [](RunConfig& c, const std::string& v) { c.anneal.converge_tolerance = number<double>(v); }},
      {"anneal.start_from_zero", [](RunConfig& c, const std::string& v) { c.anneal.start_from_zero = boolean(v); }},
      {"spectrum.field", [](RunConfig& c, const std::string& v) { c.spectrum_field = trim(v); }},
  };
  return table;
}

using Entries = std::vector<std::pair<std::string, std::string>>;

Entries read_ini(std::string_view text, std::vector<Problem>& problems) {
  namespace pt = boost::property_tree;
  Entries out;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    problems.push_back({ErrorKind::ParseError, "line " + std::to_string(e.line()) + ": " + e.message()});
    return out;
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      problems.push_back({ErrorKind::UnknownKey, section + ": keys must sit inside a [section]"});
      continue;
    }
    for (const auto& [key, value] : body) out.emplace_back(section + "." + key, value.data());
  }
  return out;
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& item : v) {
      if (!s.empty()) s += ',';
      if (item.is_array() && item.size() == 2)
        s += scalar_text(item[0]) + "-" + scalar_text(item[1]);
      else
        s += scalar_text(item);
    }
    return s;
  }
  return v.dump();
}

Entries read_json(std::string_view text, std::vector<Problem>& problems) {
  Entries out;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    problems.push_back({ErrorKind::ParseError, e.what()});
    return out;
  }
  if (!doc.is_object()) {
    problems.push_back({ErrorKind::ParseError, "top level must be an object of sections"});
    return out;
  }
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) {
      problems.push_back({ErrorKind::UnknownKey, section + ": expected a section object"});
      continue;
    }
    for (const auto& [key, value] : body.items()) out.emplace_back(section + "." + key, scalar_text(value));
  }
  return out;
}

void check(std::vector<Problem>& problems, bool ok, const std::string& key, const std::string& why) {
  if (!ok) problems.push_back({ErrorKind::ConstraintViolation, key + ": " + why});
}

void check_pairs(std::vector<Problem>& problems, const std::vector<SitePair>& ps, int sites, const std::string& key,
                 bool distinct) {
  for (const auto& [x, y] : ps) {
    check(problems, x >= 0 && x < sites && y >= 0 && y < sites, key,
          "pair " + std::to_string(x) + "-" + std::to_string(y) + " out of range");
    if (distinct) check(problems, x != y, key, "string pairs need distinct sites");
  }
}

std::vector<Problem> constraint_problems(const RunConfig& c) {
  std::vector<Problem> p;
  check(p, c.d >= 2, "model.d", "must be >= 2");
  check(p, c.L >= 1, "model.L", "must be >= 1");
  int sites = 0;
  if (c.d >= 2 && c.L >= 1) {
    const double modes = 2.0 * std::pow(2.0 * c.L, c.d);
    check(p, modes <= 20, "model.L", "lattice has " + std::to_string(static_cast<long long>(modes)) +
                                         " fermion modes, above the cap of 20");
    if (modes <= 20) sites = static_cast<int>(modes / 2);
  }
  check(p, std::isfinite(c.model.kappa), "model.kappa", "must be finite");
  check(p, std::isfinite(c.model.g) && c.model.g >= 0.0, "model.g", "must be >= 0");
  check(p, std::isfinite(c.model.K) && c.model.K > 0.0, "model.K", "must be > 0");
  check(p, c.threads >= 0, "run.threads", "must be >= 0");
  check(p, !c.out_dir.empty(), "run.out", "must not be empty");
  check(p, !c.betas.empty(), "run.betas", "must list at least one value");
  for (double b : c.betas) check(p, std::isfinite(b) && b > 0.0, "run.betas", "every beta must be > 0");
  check(p, c.samples >= 0, "run.samples", "must be >= 0");
  check(p, c.identity_seeds >= 1, "identities.seeds", "must be >= 1");
  check(p, !c.identity_kappas.empty(), "identities.kappa", "must list at least one value");
  check(p, c.identity_kappas.size() == c.identity_gs.size(), "identities.g", "must have as many entries as identities.kappa");
  for (double g : c.identity_gs) check(p, g >= 0.0, "identities.g", "every g must be >= 0");
  check(p, c.correlation_fields >= 0, "correlations.fields", "must be >= 0");
  check(p, c.orbit_samples >= 2, "orbit.samples", "must be >= 2");
  check(p, c.orbit_direct >= 0 && c.orbit_direct <= c.orbit_samples, "orbit.direct", "must be in [0, orbit.samples]");
  if (sites > 0) {
    check_pairs(p, c.correlation_pairs, sites, "correlations.pairs", false);
    check_pairs(p, c.string_pairs, sites, "string.pairs", true);
    check(p, c.orbit_x >= 0 && c.orbit_x < sites, "orbit.x", "site out of range");
    check(p, c.orbit_y >= -1 && c.orbit_y < sites, "orbit.y", "site out of range");
  }
  try {
    c.anneal.validate();
  } catch (const Error& e) {
    p.push_back({ErrorKind::ConstraintViolation, "anneal." + std::string(e.what()).substr(to_string(e.kind()).size() + 2)});
  }
  check(p, c.spectrum_field == "zero" || c.spectrum_field == "random", "spectrum.field", "must be 'zero' or 'random'");
  return p;
}

[[noreturn]] void raise(const std::vector<Problem>& problems) {
  std::string msg;
  for (const Problem& pr : problems) {
    if (!msg.empty()) msg += '\n';
    msg += pr.text;
  }
  throw Error(problems.front().kind, msg);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::vector<Problem> problems;
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = first != std::string_view::npos && text[first] == '{';
  const Entries entries = json ? read_json(text, problems) : read_ini(text, problems);
  RunConfig cfg;
  const auto& table = setters();
  std::map<std::string, int> seen;
  for (const auto& [key, value] : entries) {
    if (++seen[key] > 1) {
      problems.push_back({ErrorKind::ParseError, key + ": given more than once"});
      continue;
    }
    const auto it = table.find(key);
    if (it == table.end()) {
      problems.push_back({ErrorKind::UnknownKey, key + ": unknown key"});
      continue;
    }
    try {
      it->second(cfg, value);
    } catch (const BadValue& b) {
      problems.push_back({ErrorKind::ParseError, key + ": " + b.why});
    }
  }
  for (Problem& pr : constraint_problems(cfg)) problems.push_back(std::move(pr));
  if (!problems.empty()) raise(problems);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const RunConfig& cfg) {
  const std::vector<Problem> problems = constraint_problems(cfg);
  if (!problems.empty()) raise(problems);
}

std::string canonical_config(const RunConfig& c) {
  auto pair_list = [](const std::vector<SitePair>& ps) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& [x, y] : ps) a.push_back({x, y});
    return a;
  };
  nlohmann::ordered_json j;
  j["model"] = {{"d", c.d}, {"L", c.L}, {"kappa", c.model.kappa}, {"g", c.model.g}, {"K", c.model.K}};
  j["run"] = {{"experiment", std::string(to_string(c.experiment))}, {"seed", c.seed}, {"betas", c.betas},
              {"samples", c.samples}};
  j["identities"] = {{"seeds", c.identity_seeds}, {"kappa", c.identity_kappas}, {"g", c.identity_gs}};
  j["correlations"] = {{"fields", c.correlation_fields}, {"pairs", pair_list(c.correlation_pairs)}};
  j["orbit"] = {{"x", c.orbit_x}, {"y", c.orbit_y}, {"samples", c.orbit_samples}, {"direct", c.orbit_direct}};
  j["string"] = {{"pairs", pair_list(c.string_pairs)}};
  j["anneal"] = {{"beta", c.anneal.beta_physical},
                 {"t_initial", c.anneal.t_initial},
                 {"t_final", c.anneal.t_final},
                 {"cooling", c.anneal.cooling},
                 {"sweeps_per_temp", c.anneal.sweeps_per_temp},
                 {"proposal_width", c.anneal.proposal_width},
                 {"restarts", c.anneal.restarts},
                 {"converge_tolerance", c.anneal.converge_tolerance},
                 {"start_from_zero", c.anneal.start_from_zero}};
  j["spectrum"] = {{"field", c.spectrum_field}};
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = canonical_config(cfg);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Io, "SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace fluxlab
