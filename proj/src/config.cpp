#include "tgf/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tgf {

namespace {

// Minimal TOML subset: [section] headers, key = value with strings, numbers,
// booleans and flat arrays, # comments. Nested tables beyond one level and
// multi-line values are not supported (configs here are flat by design).
struct TomlValue {
  std::string raw;
  bool is_array = false;
  std::vector<std::string> items;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

std::map<std::string, TomlValue> parse_toml(const std::string& text) {
  std::map<std::string, TomlValue> kv;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("toml: bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("toml: expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("toml: empty key or value at line " + std::to_string(lineno));
    TomlValue tv;
    if (val.front() == '[') {
      if (val.back() != ']')
        throw std::invalid_argument("toml: unterminated array at line " + std::to_string(lineno));
      tv.is_array = true;
      std::string body = val.substr(1, val.size() - 2);
      std::string item;
      std::istringstream items(body);
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (!item.empty()) tv.items.push_back(item);
      }
    } else {
      if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
        val = val.substr(1, val.size() - 2);
      tv.raw = val;
    }
    kv[section.empty() ? key : section + "." + key] = tv;
  }
  return kv;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("toml: bad number '" + s + "'");
  return v;
}

class TomlReader {
 public:
  explicit TomlReader(std::map<std::string, TomlValue> kv) : kv_(std::move(kv)) {}

  void get(const std::string& key, double& out) {
    auto it = find(key);
    if (it) out = to_double(it->raw);
  }
  void get(const std::string& key, int& out) {
    auto it = find(key);
    if (it) out = static_cast<int>(std::llround(to_double(it->raw)));
  }
  void get(const std::string& key, std::uint64_t& out) {
    auto it = find(key);
    if (it) out = static_cast<std::uint64_t>(std::stoull(it->raw));
  }
  void get(const std::string& key, std::string& out) {
    auto it = find(key);
    if (it) out = it->raw;
  }
  void get(const std::string& key, std::vector<double>& out) {
    auto it = find(key);
    if (it) {
      if (!it->is_array) throw std::invalid_argument("toml: " + key + " must be an array");
      out.clear();
      for (const auto& s : it->items) out.push_back(to_double(s));
    }
  }
  std::vector<std::string> unused() const {
    std::vector<std::string> u;
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) u.push_back(k);
    return u;
  }

 private:
  const TomlValue* find(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }
  std::map<std::string, TomlValue> kv_;
  std::set<std::string> used_;
};

void read_all(TomlReader& r, ExperimentConfig& c) {
  r.get("kind", c.kind);
  r.get("grid.Lx", c.Lx);
  r.get("grid.Ly", c.Ly);
  r.get("grid.nx", c.nx);
  r.get("grid.ny", c.ny);
  r.get("params.nu", c.nu);
  r.get("params.alpha", c.alpha);
  r.get("params.beta", c.beta);
  r.get("params.chi", c.chi);
  r.get("params.forcing", c.forcing);
  r.get("params.forcing_amplitude", c.forcing_amplitude);
  r.get("noise.n_modes", c.n_modes);
  r.get("noise.s_exp", c.s_exp);
  r.get("noise.r_exp", c.r_exp);
  r.get("noise.amplitude", c.noise_amplitude);
  r.get("noise.seed", c.seed);
  r.get("run.dt", c.dt);
  r.get("run.t_end", c.t_end);
  r.get("run.horizons", c.horizons);
  r.get("run.n_members", c.n_members);
  r.get("run.init_radius", c.init_radius);
  r.get("run.burn_in", c.burn_in);
  r.get("run.horizon", c.horizon);
  r.get("run.n_omega", c.n_omega);
  r.get("run.c_stab", c.c_stab);
  r.get("run.kappa_window", c.kappa_window);
  r.get("run.calib_samples", c.calib_samples);
  r.get("run.property_trials", c.property_trials);
  r.get("run.threads", c.threads);
  const auto unused = r.unused();
  if (!unused.empty()) {
    std::string msg = "config: unknown keys:";
    for (const auto& k : unused) msg += " " + k;
    throw std::invalid_argument(msg);
  }
}

}  // namespace

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> errs;
  static const std::vector<std::string> kinds = {
      "simulate", "properties", "pullback", "tails",
      "invariant-measure", "calibrate", "ou-diagnostics"};
  bool known = false;
  for (const auto& k : kinds) known = known || (k == kind);
  if (!known) errs.push_back("kind: unknown experiment kind '" + kind + "'");
  if (!(Lx > 0.0)) errs.push_back("grid.Lx: must be positive");
  if (!(Ly > 0.0)) errs.push_back("grid.Ly: must be positive");
  if (nx < 4) errs.push_back("grid.nx: grid too coarse (need >= 4)");
  if (ny < 4) errs.push_back("grid.ny: grid too coarse (need >= 4)");
  if (!(nu > 0.0)) errs.push_back("params.nu: must be positive");
  if (!(beta > 0.0)) errs.push_back("params.beta: must be positive");
  if (chi < 0.0) errs.push_back("params.chi: must be nonnegative");
  if (!(std::abs(alpha) < std::sqrt(2.0 * nu * beta)))
    errs.push_back("params.alpha: parameter regime violated, need |alpha| < sqrt(2*nu*beta)");
  if (forcing != "none" && forcing != "centered")
    errs.push_back("params.forcing: must be 'none' or 'centered'");
  if (forcing == "centered" && !(forcing_amplitude > 0.0))
    errs.push_back("params.forcing_amplitude: must be positive for centered forcing");
  if (n_modes < 1) errs.push_back("noise.n_modes: must be >= 1");
  if (!(s_exp > 0.5)) errs.push_back("noise.s_exp: must exceed 0.5 (summability)");
  if (noise_amplitude < 0.0) errs.push_back("noise.amplitude: must be nonnegative");
  if (!(dt > 0.0)) errs.push_back("run.dt: must be positive");
  if (!(t_end > 0.0)) errs.push_back("run.t_end: must be positive");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1]) {
      errs.push_back("run.horizons: must be strictly increasing");
      break;
    }
  if (n_members < 1) errs.push_back("run.n_members: must be >= 1");
  if (!(init_radius > 0.0)) errs.push_back("run.init_radius: must be positive");
  if (!(burn_in > 0.0)) errs.push_back("run.burn_in: must be positive");
  if (!(horizon > burn_in)) errs.push_back("run.horizon: must exceed run.burn_in");
  if (n_omega < 2) errs.push_back("run.n_omega: must be >= 2");
  if (!(c_stab > 0.0)) errs.push_back("run.c_stab: must be positive");
  if (threads < 0) errs.push_back("run.threads: must be nonnegative");
  return errs;
}

std::string ExperimentConfig::to_canonical_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["grid"] = {{"Lx", Lx}, {"Ly", Ly}, {"nx", nx}, {"ny", ny}};
  j["params"] = {{"nu", nu},       {"alpha", alpha},
                 {"beta", beta},   {"chi", chi},
                 {"forcing", forcing}, {"forcing_amplitude", forcing_amplitude}};
  j["noise"] = {{"n_modes", n_modes}, {"s_exp", s_exp},       {"r_exp", r_exp},
                {"amplitude", noise_amplitude}, {"seed", seed}};
  j["run"] = {{"dt", dt},
              {"t_end", t_end},
              {"horizons", horizons},
              {"n_members", n_members},
              {"init_radius", init_radius},
              {"burn_in", burn_in},
              {"horizon", horizon},
              {"n_omega", n_omega},
              {"c_stab", c_stab},
              {"kappa_window", kappa_window},
              {"calib_samples", calib_samples},
              {"property_trials", property_trials},
              {"threads", threads}};
  return j.dump(2);
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string s = to_canonical_json();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return from_json(text);
  return from_toml(text);
}

ExperimentConfig ExperimentConfig::from_toml(const std::string& text) {
  ExperimentConfig c;
  TomlReader r(parse_toml(text));
  read_all(r, c);
  return c;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  auto get = [&](const nlohmann::json& obj, const char* key, auto& out) {
    if (obj.contains(key)) out = obj.at(key).get<std::decay_t<decltype(out)>>();
  };
  get(j, "kind", c.kind);
  if (j.contains("grid")) {
    get(j["grid"], "Lx", c.Lx);
    get(j["grid"], "Ly", c.Ly);
    get(j["grid"], "nx", c.nx);
    get(j["grid"], "ny", c.ny);
  }
  if (j.contains("params")) {
    get(j["params"], "nu", c.nu);
    get(j["params"], "alpha", c.alpha);
    get(j["params"], "beta", c.beta);
    get(j["params"], "chi", c.chi);
    get(j["params"], "forcing", c.forcing);
    get(j["params"], "forcing_amplitude", c.forcing_amplitude);
  }
  if (j.contains("noise")) {
    get(j["noise"], "n_modes", c.n_modes);
    get(j["noise"], "s_exp", c.s_exp);
    get(j["noise"], "r_exp", c.r_exp);
    get(j["noise"], "amplitude", c.noise_amplitude);
    get(j["noise"], "seed", c.seed);
  }
  if (j.contains("run")) {
    get(j["run"], "dt", c.dt);
    get(j["run"], "t_end", c.t_end);
    get(j["run"], "horizons", c.horizons);
    get(j["run"], "n_members", c.n_members);
    get(j["run"], "init_radius", c.init_radius);
    get(j["run"], "burn_in", c.burn_in);
    get(j["run"], "horizon", c.horizon);
    get(j["run"], "n_omega", c.n_omega);
    get(j["run"], "c_stab", c.c_stab);
    get(j["run"], "kappa_window", c.kappa_window);
    get(j["run"], "calib_samples", c.calib_samples);
    get(j["run"], "property_trials", c.property_trials);
    get(j["run"], "threads", c.threads);
  }
  return c;
}

Grid ExperimentConfig::make_grid() const { return build_grid(Lx, Ly, nx, ny); }

PhysParams ExperimentConfig::make_params(const Grid& g) const {
  PhysParams p;
  p.nu = nu;
  p.alpha = alpha;
  p.beta = beta;
  p.chi = chi;
  if (forcing == "centered") p.f = centered_forcing(g, forcing_amplitude);
  p.validate();
  return p;
}

VelocityField centered_forcing(const Grid& g, double amplitude) {
  // discrete curl of a compact bump at the domain center: divergence-free and
  // localized, so exterior tails are meaningful on channel domains
  const double cx = 0.5 * g.Lx, cy = 0.5 * g.Ly;
  const double rx = 0.25 * g.Lx, ry = 0.35 * g.Ly;
  auto psi = [&](double x, double y) {
    const double qx = (x - cx) / rx, qy = (y - cy) / ry;
    const double q = qx * qx + qy * qy;
    return q >= 1.0 ? 0.0 : std::pow(1.0 - q, 3);
  };
  VelocityField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      f.U(i, j) = (psi(g.xf(i), g.yf(j + 1)) - psi(g.xf(i), g.yf(j))) / g.hy;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      f.V(i, j) = -(psi(g.xf(i + 1), g.yf(j)) - psi(g.xf(i), g.yf(j))) / g.hx;
  const double n = norm2(f);
  if (n > 0.0) f *= amplitude / n;
  return f;
}

}  // namespace tgf
