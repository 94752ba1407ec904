#include "thermolens/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "thermolens/errors.hpp"

namespace thermolens {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;
using RawDoc = std::map<std::string, Section>;

const std::set<std::string> kSections = {"grid",    "medium", "sound_speed", "absorption", "time",
                                         "picard",  "initial", "output",     "diagnostics", "mms"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

RawDoc tokenize(std::string_view text) {
  RawDoc doc;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw);
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(current)) throw ParseError(line_no, "unknown section [" + current + "]");
      if (doc.count(current)) throw ParseError(line_no, "duplicate section [" + current + "]");
      doc[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    if (current.empty()) throw ParseError(line_no, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    auto& sec = doc[current];
    if (sec.count(key)) throw ParseError(line_no, "duplicate key " + current + "." + key);
    sec[key] = Entry{value, line_no, false};
  }
  return doc;
}

class Reader {
 public:
  explicit Reader(RawDoc& doc) : doc_(doc) {}

  bool has(const std::string& sec, const std::string& key) const {
    auto s = doc_.find(sec);
    return s != doc_.end() && s->second.count(key);
  }
  bool has_section(const std::string& sec) const { return doc_.count(sec) > 0; }

  double real(const std::string& sec, const std::string& key, std::optional<double> def) {
    Entry* e = find(sec, key);
    if (!e) return required(sec, key, def);
    double v = 0.0;
    const auto* b = e->value.data();
    const auto* end = b + e->value.size();
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(e->line, sec + "." + key + ": expected a number, got '" + e->value + "'");
    }
    return v;
  }

  int integer(const std::string& sec, const std::string& key, std::optional<int> def) {
    Entry* e = find(sec, key);
    if (!e) return static_cast<int>(required(sec, key, def ? std::optional<double>(*def) : std::nullopt));
    int v = 0;
    const auto* b = e->value.data();
    const auto* end = b + e->value.size();
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(e->line, sec + "." + key + ": expected an integer, got '" + e->value + "'");
    }
    return v;
  }

  std::string text(const std::string& sec, const std::string& key, std::optional<std::string> def) {
    Entry* e = find(sec, key);
    if (!e) {
      if (!def) throw ValidationError(sec + "." + key, "required key missing");
      return *def;
    }
    return e->value;
  }

  bool boolean(const std::string& sec, const std::string& key, bool def) {
    Entry* e = find(sec, key);
    if (!e) return def;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ParseError(e->line, sec + "." + key + ": expected true or false");
  }

  std::vector<double> reals(const std::string& sec, const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) throw ValidationError(sec + "." + key, "required key missing");
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        throw ParseError(e->line, sec + "." + key + ": bad list entry '" + item + "'");
      }
      out.push_back(v);
    }
    return out;
  }

  int line_of(const std::string& sec, const std::string& key) const {
    return doc_.at(sec).at(key).line;
  }

  void reject_unused() const {
    for (const auto& [sec, entries] : doc_) {
      for (const auto& [key, e] : entries) {
        if (!e.used) throw ParseError(e.line, "unknown key " + sec + "." + key);
      }
    }
  }

 private:
  Entry* find(const std::string& sec, const std::string& key) {
    auto s = doc_.find(sec);
    if (s == doc_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  static double required(const std::string& sec, const std::string& key, std::optional<double> def) {
    if (!def) throw ValidationError(sec + "." + key, "required key missing");
    return *def;
  }

  RawDoc& doc_;
};

InitialSpec read_initial(Reader& r, const std::string& name) {
  InitialSpec s;
  const std::string kind = r.text("initial", name, std::string("zero"));
  if (kind == "zero") {
    s.kind = InitialKind::Zero;
  } else if (kind == "sine") {
    s.kind = InitialKind::Sine;
  } else if (kind == "gaussian") {
    s.kind = InitialKind::Gaussian;
  } else if (kind == "gaussian_dx") {
    s.kind = InitialKind::GaussianSlope;
  } else {
    throw ValidationError("initial." + name, "unknown kind '" + kind + "'");
  }
  s.amplitude = r.real("initial", name + "_amplitude", 0.0);
  s.mx = r.integer("initial", name + "_mx", 1);
  s.my = r.integer("initial", name + "_my", 1);
  s.cx = r.real("initial", name + "_cx", 0.5);
  s.cy = r.real("initial", name + "_cy", 0.5);
  s.width = r.real("initial", name + "_width", 0.1);
  if ((s.kind == InitialKind::Gaussian || s.kind == InitialKind::GaussianSlope) && !(s.width > 0.0)) {
    throw ValidationError("initial." + name + "_width", "must be > 0");
  }
  return s;
}

Envelope read_envelope(Reader& r, const std::string& prefix) {
  Envelope e;
  e.offset = r.real("mms", prefix + "_offset", 1.0);
  e.amp = r.real("mms", prefix + "_env_amp", 0.0);
  e.omega = r.real("mms", prefix + "_omega", 0.0);
  e.decay = r.real("mms", prefix + "_decay", 0.0);
  e.phase = r.real("mms", prefix + "_phase", 0.0);
  return e;
}

MmsSettings read_mms(Reader& r) {
  MmsSettings m;
  auto& s = m.solution;
  s.p_amp = r.real("mms", "p_amp", 0.0);
  s.p_mx = r.integer("mms", "p_mx", 1);
  s.p_my = r.integer("mms", "p_my", 1);
  s.p_env = read_envelope(r, "p");
  s.theta_amp = r.real("mms", "theta_amp", 0.0);
  s.theta_mx = r.integer("mms", "theta_mx", 1);
  s.theta_my = r.integer("mms", "theta_my", 1);
  s.theta_env = read_envelope(r, "theta");
  s.discrete_laplacian = r.boolean("mms", "discrete_laplacian", false);
  if (r.has("mms", "levels")) {
    const std::string spec = r.text("mms", "levels", std::nullopt);
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw ParseError(r.line_of("mms", "levels"), "mms.levels: expected n:dt entries");
      }
      try {
        m.levels.emplace_back(std::stoi(trim(item.substr(0, colon))),
                              std::stod(trim(item.substr(colon + 1))));
      } catch (const std::exception&) {
        throw ParseError(r.line_of("mms", "levels"), "mms.levels: bad entry '" + trim(item) + "'");
      }
    }
  }
  return m;
}

ConfigDocument build(RawDoc& raw) {
  Reader r(raw);
  ConfigDocument doc;
  SimConfig& c = doc.sim;

  c.grid.dims = r.integer("grid", "dims", 1);
  c.grid.lx = r.real("grid", "lx", std::nullopt);
  c.grid.nx = r.integer("grid", "nx", std::nullopt);
  c.grid.ly = r.real("grid", "ly", c.grid.dims == 2 ? std::nullopt : std::optional<double>(c.grid.lx));
  c.grid.ny = r.integer("grid", "ny", c.grid.dims == 2 ? std::nullopt : std::optional<int>(c.grid.nx));

  MediumParams& m = c.medium;
  const MediumParams d;
  m.rho = r.real("medium", "rho", std::nullopt);
  m.beta_acou = r.real("medium", "beta_acou", d.beta_acou);
  m.b = r.real("medium", "b", std::nullopt);
  m.rho_a = r.real("medium", "rho_a", d.rho_a);
  m.C_a = r.real("medium", "C_a", d.C_a);
  m.kappa_a = r.real("medium", "kappa_a", d.kappa_a);
  m.rho_b = r.real("medium", "rho_b", d.rho_b);
  m.C_b = r.real("medium", "C_b", d.C_b);
  m.W = r.real("medium", "W", d.W);
  m.Theta_a = r.real("medium", "Theta_a", d.Theta_a);
  m.c_a = r.real("medium", "c_a", d.c_a);
  m.omega = r.real("medium", "omega", d.omega);
  m.q0 = r.real("medium", "q0", d.q0);
  m.gamma1 = r.real("medium", "gamma1", d.gamma1);
  m.gamma2 = r.real("medium", "gamma2", d.gamma2);

  const std::string preset = r.text("sound_speed", "preset", std::string("water"));
  const double floor = r.real("sound_speed", "floor_q0", m.q0);
  if (preset == "water") {
    c.law = SoundSpeedLaw::water(floor);
  } else if (preset == "constant") {
    c.law = SoundSpeedLaw::constant(r.real("sound_speed", "c", std::nullopt), floor);
  } else if (preset == "custom") {
    c.law = SoundSpeedLaw{r.reals("sound_speed", "coefficients"), floor};
  } else {
    throw ValidationError("sound_speed.preset", "unknown preset '" + preset + "'");
  }

  const double scale = r.real("absorption", "scale", absorption_scale(m));
  const std::string model = r.text("absorption", "model", std::string("instantaneous"));
  if (model == "instantaneous") {
    c.absorption = AbsorptionModel::instantaneous(scale);
  } else if (model == "windowed") {
    const double t_start = r.real("absorption", "t_start", std::nullopt);
    double window = 0.0;
    if (r.has("absorption", "window")) {
      window = r.real("absorption", "window", std::nullopt);
    } else {
      window = r.integer("absorption", "periods", std::nullopt) * r.real("absorption", "period", std::nullopt);
    }
    c.absorption = AbsorptionModel::windowed(scale, t_start, 1, window);
  } else if (model == "full") {
    c.absorption = AbsorptionModel::full(scale, r.real("absorption", "horizon", std::nullopt));
  } else {
    throw ValidationError("absorption.model", "unknown model '" + model + "'");
  }
  c.history_decimation = r.integer("absorption", "decimation", 1);
  const int capacity = r.integer("absorption", "capacity", 0);
  if (capacity < 0) throw ValidationError("absorption.capacity", "must be >= 0");
  c.history_capacity = static_cast<std::size_t>(capacity);

  c.dt = r.real("time", "dt", std::nullopt);
  c.t_end = r.real("time", "t_end", std::nullopt);

  c.picard.tol = r.real("picard", "tol", 1e-10);
  c.picard.max_iter = r.integer("picard", "max_iter", 50);
  c.degeneracy_floor = r.real("picard", "degeneracy_floor", 0.1);
  c.linear.rel_tol = r.real("picard", "linear_tol", 1e-10);

  c.p0 = read_initial(r, "p0");
  c.p1 = read_initial(r, "p1");
  c.theta0 = read_initial(r, "theta0");

  c.output_every = r.integer("output", "every", 1);
  c.gronwall_cap = r.real("diagnostics", "gronwall_cap", 1e6);

  if (r.has_section("mms")) doc.mms = read_mms(r);

  r.reject_unused();
  validate(c);
  return doc;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::Zero: return "zero";
    case InitialKind::Sine: return "sine";
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::GaussianSlope: return "gaussian_dx";
  }
  return "zero";
}

void render_initial(std::ostringstream& os, const std::string& name, const InitialSpec& s) {
  os << name << " = " << kind_name(s.kind) << "\n";
  os << name << "_amplitude = " << num(s.amplitude) << "\n";
  os << name << "_mx = " << s.mx << "\n";
  os << name << "_my = " << s.my << "\n";
  os << name << "_cx = " << num(s.cx) << "\n";
  os << name << "_cy = " << num(s.cy) << "\n";
  os << name << "_width = " << num(s.width) << "\n";
}

}  // namespace

ConfigDocument parse_document(std::string_view text) {
  RawDoc raw = tokenize(text);
  return build(raw);
}

SimConfig parse_config(std::string_view text) { return parse_document(text).sim; }

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path.string(), "cannot open config");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_document(ss.str());
}

ConfigDocument apply_override(std::string_view text, const std::string& dotted_key,
                              const std::string& value) {
  RawDoc raw = tokenize(text);
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ValidationError(dotted_key, "expected section.key");
  const std::string sec = dotted_key.substr(0, dot);
  if (!kSections.count(sec)) throw ValidationError(dotted_key, "unknown section");
  raw[sec][dotted_key.substr(dot + 1)] = Entry{value, 0, false};
  return build(raw);
}

std::string render_config(const SimConfig& c) {
  std::ostringstream os;
  os << "[grid]\n";
  os << "dims = " << c.grid.dims << "\n";
  os << "lx = " << num(c.grid.lx) << "\nnx = " << c.grid.nx << "\n";
  os << "ly = " << num(c.grid.ly) << "\nny = " << c.grid.ny << "\n";

  const MediumParams& m = c.medium;
  os << "\n[medium]\n";
  os << "rho = " << num(m.rho) << "\nbeta_acou = " << num(m.beta_acou) << "\nb = " << num(m.b) << "\n";
  os << "rho_a = " << num(m.rho_a) << "\nC_a = " << num(m.C_a) << "\nkappa_a = " << num(m.kappa_a) << "\n";
  os << "rho_b = " << num(m.rho_b) << "\nC_b = " << num(m.C_b) << "\nW = " << num(m.W) << "\n";
  os << "Theta_a = " << num(m.Theta_a) << "\nc_a = " << num(m.c_a) << "\nomega = " << num(m.omega) << "\n";
  os << "q0 = " << num(m.q0) << "\ngamma1 = " << num(m.gamma1) << "\ngamma2 = " << num(m.gamma2) << "\n";

  os << "\n[sound_speed]\npreset = custom\ncoefficients = ";
  for (std::size_t i = 0; i < c.law.coefficients.size(); ++i) {
    os << (i ? ", " : "") << num(c.law.coefficients[i]);
  }
  os << "\nfloor_q0 = " << num(c.law.floor_q0) << "\n";

  os << "\n[absorption]\nscale = " << num(c.absorption.scale) << "\n";
  switch (c.absorption.kind) {
    case AbsorptionKind::Instantaneous:
      os << "model = instantaneous\n";
      break;
    case AbsorptionKind::WindowedAverage:
      os << "model = windowed\nt_start = " << num(c.absorption.t_start)
         << "\nwindow = " << num(c.absorption.window) << "\n";
      break;
    case AbsorptionKind::FullAverage:
      os << "model = full\nhorizon = " << num(c.absorption.horizon) << "\n";
      break;
  }
  os << "decimation = " << c.history_decimation << "\ncapacity = " << c.history_capacity << "\n";

  os << "\n[time]\ndt = " << num(c.dt) << "\nt_end = " << num(c.t_end) << "\n";
  os << "\n[picard]\ntol = " << num(c.picard.tol) << "\nmax_iter = " << c.picard.max_iter
     << "\ndegeneracy_floor = " << num(c.degeneracy_floor) << "\nlinear_tol = " << num(c.linear.rel_tol)
     << "\n";

  os << "\n[initial]\n";
  render_initial(os, "p0", c.p0);
  render_initial(os, "p1", c.p1);
  render_initial(os, "theta0", c.theta0);

  os << "\n[output]\nevery = " << c.output_every << "\n";
  os << "\n[diagnostics]\ngronwall_cap = " << num(c.gronwall_cap) << "\n";
  return os.str();
}

}  // namespace thermolens
