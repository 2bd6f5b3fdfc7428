#include "swarmtrack/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace swarmtrack {

namespace {

constexpr std::array<std::string_view, 6> kSections = {"dynamics", "agents", "cost", "gains", "potential",
                                                       "integration"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool parse_int(std::string_view s, long& out) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool is_index(std::string_view s) {
  long v = 0;
  return parse_int(s, v) && v >= 1;
}

std::string where(const ScenarioDocument::Entry& e) {
  std::string loc = e.line > 0 ? "line " + std::to_string(e.line) : std::string("override");
  return loc + ": key '" + e.section + "." + e.key + "'";
}

[[noreturn]] void fail(const ScenarioDocument::Entry& e, const std::string& msg) {
  throw ParseError(where(e) + ": " + msg);
}

}  // namespace

bool is_known_key(const std::string& section, const std::string& key) {
  static const std::vector<std::pair<std::string_view, std::vector<std::string_view>>> plain = {
      {"dynamics", {"kind"}},
      {"agents", {"count", "dim", "placement", "circle_radius", "positions", "box", "seed", "min_separation"}},
      {"cost", {"family", "sigma"}},
      {"gains", {"alpha", "beta", "tau"}},
      {"potential", {"radius", "desired_distance", "gain", "force_cap", "hysteresis"}},
      {"integration", {"dt", "t_end", "integrator", "sgn", "kappa", "record_every"}},
  };
  for (const auto& [s, keys] : plain) {
    if (s == section && std::find(keys.begin(), keys.end(), key) != keys.end()) return true;
  }
  const auto parts = split(key, '.');
  if (section == "cost") {
    if (parts.size() == 2 && parts[0] == "signal" && is_index(parts[1])) return true;
    if (parts.size() == 4 && parts[0] == "agent" && is_index(parts[1]) && parts[2] == "signal" &&
        is_index(parts[3])) {
      return true;
    }
  }
  if (section == "potential" && parts.size() == 3 && (parts[0] == "distance" || parts[0] == "weight") &&
      is_index(parts[1]) && is_index(parts[2])) {
    return true;
  }
  return false;
}

ScenarioDocument ScenarioDocument::parse(std::string_view text) {
  ScenarioDocument doc;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = raw.find('#');
    std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("line " + std::to_string(line_no) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
        throw ParseError("line " + std::to_string(line_no) + ": unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    Entry e{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
    if (section.empty()) fail(e, "key outside of any section");
    if (!is_known_key(e.section, e.key)) fail(e, "unknown key");
    if (doc.find(e.section, e.key)) fail(e, "duplicate key");
    doc.entries_.push_back(std::move(e));
  }
  return doc;
}

ScenarioDocument ScenarioDocument::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string* ScenarioDocument::find(const std::string& section, const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) return &e.value;
  }
  return nullptr;
}

void ScenarioDocument::set(const std::string& path, const std::string& value) {
  const auto dot = path.find('.');
  if (dot == std::string::npos) throw ParseError("override '" + path + "': expected section.key");
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  if (!is_known_key(section, key)) throw ParseError("override '" + path + "': unknown key");
  for (auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.value = value;
      e.line = 0;
      return;
    }
  }
  entries_.push_back({section, key, value, 0});
}

void ScenarioDocument::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError("override '" + assignment + "': expected key=value");
  set(std::string(trim(std::string_view(assignment).substr(0, eq))),
      std::string(trim(std::string_view(assignment).substr(eq + 1))));
}

std::string ScenarioDocument::to_text() const {
  std::ostringstream os;
  bool first = true;
  for (const auto section : kSections) {
    bool header = false;
    for (const auto& e : entries_) {
      if (e.section != section) continue;
      if (!header) {
        if (!first) os << '\n';
        os << '[' << section << "]\n";
        header = true;
        first = false;
      }
      os << e.key << " = " << e.value << '\n';
    }
  }
  return os.str();
}

AgentMatrix circle_placement(int agents, int dim, double radius) {
  require(dim >= 2, "placement: circle needs dim >= 2");
  require(radius > 0.0, "placement: circle radius must be positive");
  AgentMatrix x = AgentMatrix::Zero(agents, dim);
  for (int i = 0; i < agents; ++i) {
    const double a = 2.0 * std::numbers::pi * i / agents;
    x(i, 0) = radius * std::cos(a);
    x(i, 1) = radius * std::sin(a);
  }
  return x;
}

AgentMatrix random_placement(int agents, int dim, double half_width, std::uint64_t seed, double min_separation) {
  require(half_width > 0.0, "placement: box must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half_width, half_width);
  AgentMatrix x(agents, dim);
  for (int i = 0; i < agents; ++i) {
    int attempts = 0;
    for (;;) {
      for (int k = 0; k < dim; ++k) x(i, k) = u(rng);
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = (x.row(i) - x.row(j)).norm() >= min_separation;
      if (ok) break;
      if (++attempts > 10000) throw ConfigError("placement: cannot honour min_separation in box");
    }
  }
  return x;
}

ScalarSignal parse_signal(std::string_view spec, int agent_index) {
  ScalarSignal out;
  std::vector<std::vector<std::string_view>> terms(1);
  std::istringstream words{std::string(spec)};
  std::vector<std::string> storage;
  for (std::string w; words >> w;) storage.push_back(w);
  for (const auto& w : storage) {
    if (w == "+") {
      terms.emplace_back();
    } else {
      terms.back().push_back(w);
    }
  }
  for (const auto& words_of_term : terms) {
    if (words_of_term.empty()) {
      if (terms.size() == 1) return out;  // blank spec means zero
      throw ConfigError("signal: empty term");
    }
    const auto kind = words_of_term.front();
    SignalTerm term;
    if (kind == "zero") {
      if (words_of_term.size() != 1) throw ConfigError("signal: 'zero' takes no parameters");
      continue;
    }
    if (kind == "sinusoid") {
      term.kind = SignalKind::Sinusoid;
    } else if (kind == "cosine") {
      term.kind = SignalKind::Cosine;
    } else if (kind == "damped") {
      term.kind = SignalKind::Damped;
    } else if (kind == "polynomial") {
      term.kind = SignalKind::Polynomial;
    } else if (kind == "constant") {
      term.kind = SignalKind::Constant;
    } else {
      throw ConfigError("signal: unknown kind '" + std::string(kind) + "'");
    }
    double scale = 1.0;
    for (std::size_t w = 1; w < words_of_term.size(); ++w) {
      const auto eq = words_of_term[w].find('=');
      if (eq == std::string_view::npos) throw ConfigError("signal: expected key=value, got '" + std::string(words_of_term[w]) + "'");
      const auto key = words_of_term[w].substr(0, eq);
      const auto val = words_of_term[w].substr(eq + 1);
      double* slot = nullptr;
      if (key == "amp") {
        slot = &term.amplitude;
      } else if (key == "omega") {
        slot = &term.omega;
      } else if (key == "phase") {
        slot = &term.phase;
      } else if (key == "scale") {
        if (val == "index") {
          scale = agent_index;
        } else if (val != "one") {
          throw ConfigError("signal: scale must be 'one' or 'index'");
        }
        continue;
      } else if (key == "coeffs" && term.kind == SignalKind::Polynomial) {
        for (auto c : split(val, ',')) {
          double v = 0.0;
          if (!parse_number(c, v)) throw ConfigError("signal: bad polynomial coefficient '" + std::string(c) + "'");
          term.coeffs.push_back(v);
        }
        continue;
      } else {
        throw ConfigError("signal: key '" + std::string(key) + "' not valid for " + std::string(kind));
      }
      if (!parse_number(val, *slot) || !std::isfinite(*slot)) {
        throw ConfigError("signal: bad number for '" + std::string(key) + "'");
      }
    }
    if (term.kind == SignalKind::Polynomial) {
      for (double& c : term.coeffs) c *= scale;
    } else {
      term.amplitude *= scale;
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

namespace {

class Resolver {
 public:
  explicit Resolver(const ScenarioDocument& doc) : doc_(doc) {}

  const ScenarioDocument::Entry* entry(const std::string& section, const std::string& key) const {
    for (const auto& e : doc_.entries()) {
      if (e.section == section && e.key == key) return &e;
    }
    return nullptr;
  }

  const ScenarioDocument::Entry& required(const std::string& section, const std::string& key) const {
    const auto* e = entry(section, key);
    if (!e) throw ParseError("missing key '" + section + "." + key + "'");
    return *e;
  }

  double number(const ScenarioDocument::Entry& e) const {
    double v = 0.0;
    if (!parse_number(e.value, v) || !std::isfinite(v)) fail(e, "expected a finite number, got '" + e.value + "'");
    return v;
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const auto* e = entry(section, key);
    return e ? number(*e) : fallback;
  }

  long integer(const std::string& section, const std::string& key, long fallback) const {
    const auto* e = entry(section, key);
    if (!e) return fallback;
    long v = 0;
    if (!parse_int(e->value, v)) fail(*e, "expected an integer, got '" + e->value + "'");
    return v;
  }

  std::string word(const std::string& section, const std::string& key, const std::string& fallback) const {
    const auto* e = entry(section, key);
    return e ? e->value : fallback;
  }

  template <class F>
  auto checked(const ScenarioDocument::Entry* e, F&& f) const {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const ConfigError& err) {
      if (e) fail(*e, err.what());
      throw;
    }
  }

 private:
  const ScenarioDocument& doc_;
};

void expect(bool cond, const ScenarioDocument::Entry* e, const std::string& section, const std::string& key,
            const std::string& msg) {
  if (cond) return;
  if (e) fail(*e, msg);
  throw ParseError("key '" + section + "." + key + "': " + msg);
}

}  // namespace

Scenario resolve(const ScenarioDocument& doc) {
  const Resolver r(doc);

  SimConfig cfg;
  const auto& kind = r.required("dynamics", "kind");
  if (kind.value == "single") {
    cfg.dynamics = Dynamics::Single;
  } else if (kind.value == "double") {
    cfg.dynamics = Dynamics::Double;
  } else {
    fail(kind, "expected 'single' or 'double'");
  }

  const long n = r.integer("agents", "count", 0);
  expect(n >= 1, r.entry("agents", "count"), "agents", "count", "must be at least 1");
  const long m = r.integer("agents", "dim", 2);
  expect(m >= 1, r.entry("agents", "dim"), "agents", "dim", "must be at least 1");
  const int agents = static_cast<int>(n);
  const int dim = static_cast<int>(m);

  // initial placement
  AgentMatrix x0;
  const std::string placement = r.word("agents", "placement", "circle");
  if (placement == "circle") {
    const auto* e = r.entry("agents", "circle_radius");
    const double radius = r.number("agents", "circle_radius", 1.5);
    x0 = r.checked(e ? e : r.entry("agents", "placement"), [&] { return circle_placement(agents, dim, radius); });
  } else if (placement == "explicit") {
    const auto& e = r.required("agents", "positions");
    const auto rows = split(e.value, ';');
    if (static_cast<long>(rows.size()) != n) fail(e, "expected " + std::to_string(n) + " positions");
    x0.resize(agents, dim);
    for (int i = 0; i < agents; ++i) {
      const auto cols = split(rows[static_cast<std::size_t>(i)], ',');
      if (static_cast<long>(cols.size()) != m) fail(e, "position " + std::to_string(i + 1) + " has wrong dimension");
      for (int k = 0; k < dim; ++k) {
        double v = 0.0;
        if (!parse_number(cols[static_cast<std::size_t>(k)], v) || !std::isfinite(v)) fail(e, "bad coordinate");
        x0(i, k) = v;
      }
    }
  } else if (placement == "random") {
    const double box = r.number("agents", "box", 3.0);
    const long seed = r.integer("agents", "seed", 1);
    const double sep = r.number("agents", "min_separation", 0.3);
    x0 = r.checked(r.entry("agents", "placement"), [&] {
      return random_placement(agents, dim, box, static_cast<std::uint64_t>(seed), sep);
    });
  } else {
    fail(*r.entry("agents", "placement"), "expected circle, explicit or random");
  }

  // costs
  const auto* family = r.entry("cost", "family");
  if (family && family->value != "affine") fail(*family, "only the affine family is supported");
  const auto& sigma_entry = r.required("cost", "sigma");
  const double sigma = r.number(sigma_entry);
  if (!(sigma > 0.0)) fail(sigma_entry, "sigma must be positive");
  for (const auto& e : doc.entries()) {
    if (e.section != "cost") continue;
    const auto parts = split(e.key, '.');
    long k = 0;
    long i = 0;
    if (parts[0] == "signal") parse_int(parts[1], k);
    if (parts[0] == "agent") {
      parse_int(parts[1], i);
      parse_int(parts[3], k);
      if (i > n) fail(e, "agent index out of range");
    }
    if (k > m) fail(e, "coordinate index out of range");
  }
  std::vector<AffineGradientCost> members;
  for (int i = 1; i <= agents; ++i) {
    std::vector<ScalarSignal> comps;
    for (int k = 1; k <= dim; ++k) {
      const auto* e = r.entry("cost", "agent." + std::to_string(i) + ".signal." + std::to_string(k));
      if (!e) e = r.entry("cost", "signal." + std::to_string(k));
      comps.push_back(e ? r.checked(e, [&] { return parse_signal(e->value, i); }) : ScalarSignal{});
    }
    members.emplace_back(sigma, TimeSignal(std::move(comps)));
  }
  TeamCost team(std::move(members));

  // gains
  const double alpha = r.number("gains", "alpha", cfg.dynamics == Dynamics::Single ? 0.0 : 1.0);
  const double beta = r.number("gains", "beta", 1.0);
  const double tau = r.number("gains", "tau", 1.0);
  if (cfg.dynamics == Dynamics::Single) {
    expect(alpha >= 0.0, r.entry("gains", "alpha"), "gains", "alpha", "must be nonnegative");
    expect(tau > 0.0, r.entry("gains", "tau"), "gains", "tau", "must be positive");
  } else {
    expect(alpha > 0.0, r.entry("gains", "alpha"), "gains", "alpha", "must be positive");
  }
  expect(beta > 0.0, r.entry("gains", "beta"), "gains", "beta", "must be positive");
  cfg.single_gains = {alpha, beta, tau};
  cfg.double_gains = {alpha, beta};

  // potential
  cfg.potential.radius = r.number("potential", "radius", 5.0);
  expect(cfg.potential.radius > 0.0, r.entry("potential", "radius"), "potential", "radius", "must be positive");
  cfg.potential.desired_distance = r.number("potential", "desired_distance", 0.5);
  expect(cfg.potential.desired_distance > 0.0 && cfg.potential.desired_distance < cfg.potential.radius,
         r.entry("potential", "desired_distance"), "potential", "desired_distance", "must lie in (0, radius)");
  cfg.potential.gain = r.number("potential", "gain", 1.0);
  expect(cfg.potential.gain > 0.0, r.entry("potential", "gain"), "potential", "gain", "must be positive");
  if (const auto* e = r.entry("potential", "force_cap"); e && e->value != "none") {
    const double cap = r.number(*e);
    if (!(cap > 0.0)) fail(*e, "must be positive or 'none'");
    cfg.potential.force_cap = cap;
  }
  cfg.hysteresis = r.number("potential", "hysteresis", 0.1 * cfg.potential.radius);
  expect(cfg.hysteresis > 0.0 && cfg.hysteresis < cfg.potential.radius, r.entry("potential", "hysteresis"),
         "potential", "hysteresis", "must lie in (0, radius)");
  for (const auto& e : doc.entries()) {
    if (e.section != "potential") continue;
    const auto parts = split(e.key, '.');
    if (parts.size() != 3) continue;
    long i = 0;
    long j = 0;
    parse_int(parts[1], i);
    parse_int(parts[2], j);
    if (i > n || j > n || i == j) fail(e, "pair index out of range");
    const double v = r.number(e);
    Mat* table = nullptr;
    if (parts[0] == "distance") {
      if (!(v > 0.0 && v < cfg.potential.radius)) fail(e, "must lie in (0, radius)");
      if (!cfg.potential.pair_distance) {
        cfg.potential.pair_distance = Mat::Constant(agents, agents, cfg.potential.desired_distance);
        cfg.potential.pair_distance->diagonal().setZero();
      }
      table = &*cfg.potential.pair_distance;
    } else {
      if (!(v > 0.0)) fail(e, "must be positive");
      if (!cfg.weight_table) {
        cfg.weight_table = Mat::Ones(agents, agents);
        cfg.weight_table->diagonal().setZero();
      }
      table = &*cfg.weight_table;
    }
    (*table)(i - 1, j - 1) = v;
    (*table)(j - 1, i - 1) = v;
  }

  // integration
  cfg.dt = r.number("integration", "dt", 1e-3);
  expect(cfg.dt > 0.0, r.entry("integration", "dt"), "integration", "dt", "must be positive");
  cfg.t_end = r.number("integration", "t_end", 50.0);
  expect(cfg.t_end >= 0.0, r.entry("integration", "t_end"), "integration", "t_end", "must be nonnegative");
  const std::string integrator = r.word("integration", "integrator", "rk4");
  if (integrator == "rk4") {
    cfg.integrator = Integrator::Rk4;
  } else if (integrator == "euler") {
    cfg.integrator = Integrator::Euler;
  } else {
    fail(*r.entry("integration", "integrator"), "expected rk4 or euler");
  }
  const std::string sgn_mode = r.word("integration", "sgn", "boundary_layer");
  const double kappa = r.number("integration", "kappa", 0.01);
  if (sgn_mode == "boundary_layer") {
    expect(kappa > 0.0, r.entry("integration", "kappa"), "integration", "kappa", "must be positive");
    cfg.sgn = SgnMode::boundary_layer(kappa);
  } else if (sgn_mode == "exact") {
    cfg.sgn = SgnMode::exact();
  } else {
    fail(*r.entry("integration", "sgn"), "expected boundary_layer or exact");
  }
  const long every = r.integer("integration", "record_every", 1);
  expect(every >= 1, r.entry("integration", "record_every"), "integration", "record_every", "must be at least 1");
  cfg.record_every = static_cast<int>(every);

  // remaining cross-field checks (coincident agents and the like)
  try {
    cfg.validate(agents);
    ProximityGraph::build_initial(x0, cfg.potential.radius, cfg.hysteresis, cfg.weight_table);
  } catch (const ParseError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  return {cfg, std::move(team), SwarmState(0.0, std::move(x0))};
}

namespace {

constexpr std::string_view kSingleFig1 = R"(# Six single-integrator agents tracking the minimizer of
# sum_i |x - i (sin 0.2t, cos 0.2t)|^2.
[dynamics]
kind = single

[agents]
count = 6
dim = 2
placement = circle
circle_radius = 1.5

[cost]
family = affine
sigma = 2
signal.1 = sinusoid amp=-2 omega=0.2 scale=index
signal.2 = cosine amp=-2 omega=0.2 scale=index

[gains]
alpha = 2
beta = 5
tau = 1

[potential]
radius = 5
desired_distance = 0.5
gain = 0.1
force_cap = none
hysteresis = 0.5

[integration]
dt = 0.001
t_end = 50
integrator = rk4
sgn = boundary_layer
kappa = 0.01
record_every = 1
)";

constexpr std::string_view kDoubleFig2 = R"(# Six double-integrator agents tracking the minimizer of
# sum_i |x + (2i sin(0.5t)/(t+1), i sin(0.1t))|^2.
[dynamics]
kind = double

[agents]
count = 6
dim = 2
placement = circle
circle_radius = 1.5

[cost]
family = affine
sigma = 2
signal.1 = damped amp=4 omega=0.5 scale=index
signal.2 = sinusoid amp=2 omega=0.1 scale=index

[gains]
alpha = 10
beta = 20

[potential]
radius = 5
desired_distance = 0.5
gain = 0.1
force_cap = none
hysteresis = 0.5

[integration]
dt = 0.0001
t_end = 50
integrator = rk4
sgn = boundary_layer
kappa = 0.01
record_every = 10
)";

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"single_fig1", "single integrators, rotating optimum of radius 3.5", std::string(kSingleFig1)},
      {"double_fig2", "double integrators, damped and slow sinusoidal optimum", std::string(kDoubleFig2)},
  };
  return all;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace swarmtrack
