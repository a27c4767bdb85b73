#include "ergo/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ergo/errors.hpp"

namespace ergo {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::int64_t parse_int(const std::string& s, const std::string& key) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("'" + key + "' expects an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("'" + key + "' expects an unsigned 64-bit integer, got '" + s + "'");
  }
  return v;
}

double parse_real(const std::string& s, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("'" + key + "' expects a real number, got '" + s + "'");
  }
  return v;
}

std::vector<double> parse_reals(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part, key));
  return out;
}

std::vector<std::int64_t> parse_ints(const std::string& s, const std::string& key) {
  std::vector<std::int64_t> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_int(part, key));
  return out;
}

IntMatrix parse_matrix(const std::string& s, const std::string& key) {
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& row : split(s, ';')) rows.push_back(parse_ints(row, key));
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw ValidationError("'" + key + "' has rows of different lengths");
  }
  std::vector<std::int64_t> entries;
  for (const auto& r : rows) entries.insert(entries.end(), r.begin(), r.end());
  return IntMatrix(rows.size(), rows.front().size(), std::move(entries));
}

std::string join_reals(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
  return out;
}

std::string join_ints(std::span<const std::int64_t> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string format_matrix(const IntMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (r) out += ";";
    out += join_ints(std::span<const std::int64_t>(m.entries).subspan(r * m.cols, m.cols));
  }
  return out;
}

const std::string& require_key(const KeyValues& block, const std::string& key) {
  const auto it = block.find(key);
  if (it == block.end()) throw ValidationError("system block is missing '" + key + "'");
  return it->second;
}

void require_keys_only(const KeyValues& block, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : block) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ValidationError("unexpected key '" + k + "' in system block");
  }
}

std::string mode_name(SeminormMode m) {
  switch (m) {
    case SeminormMode::automatic:
      return "automatic";
    case SeminormMode::exact:
      return "exact";
    case SeminormMode::monte_carlo:
      return "monte_carlo";
  }
  return "automatic";
}

SeminormMode parse_mode(const std::string& s) {
  for (auto m : {SeminormMode::automatic, SeminormMode::exact, SeminormMode::monte_carlo}) {
    if (mode_name(m) == s) return m;
  }
  throw ValidationError("unknown seminorm mode '" + s + "'");
}

std::string design_name(StartDesign d) { return d == StartDesign::haar ? "haar" : "kronecker"; }

StartDesign parse_design(const std::string& s) {
  if (s == "haar") return StartDesign::haar;
  if (s == "kronecker") return StartDesign::kronecker;
  throw ValidationError("unknown start design '" + s + "'");
}

void apply_experiment_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "name") {
    if (value.empty() || value.find_first_of("/\\") != std::string::npos) {
      throw ValidationError("experiment name must be a plain non-empty file stem");
    }
    c.name = value;
  } else if (key == "command") {
    c.command = parse_command(value);
  } else if (key == "scheme") {
    c.scheme = parse_scheme(value);
  } else if (key == "d") {
    c.d = static_cast<int>(parse_int(value, key));
  } else if (key == "N") {
    c.schedule = parse_ints(value, key);
  } else if (key == "H") {
    c.H = parse_int(value, key);
  } else if (key == "order") {
    c.order = static_cast<int>(parse_int(value, key));
  } else if (key == "samples") {
    c.samples = parse_int(value, key);
  } else if (key == "seed") {
    c.seed = parse_u64(value, key);
  } else if (key == "start") {
    c.start = parse_reals(value, key);
  } else if (key == "search_bound") {
    c.search_bound = static_cast<int>(parse_int(value, key));
  } else if (key == "seminorm_mode") {
    c.seminorm_mode = parse_mode(value);
  } else if (key == "start_design") {
    c.start_design = parse_design(value);
  } else if (key == "vdc_sequence") {
    c.vdc_sequence = value;
  } else if (key == "vdc_dimension") {
    c.vdc_dimension = static_cast<int>(parse_int(value, key));
  } else {
    throw ValidationError("unknown key '" + key + "' in [experiment]");
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KeyValues system_to_block(const DynamicalSystem& system) {
  KeyValues b;
  b["kind"] = system.kind_name();
  if (const auto* r = system.as<Rotation>()) {
    b["alpha"] = join_reals(r->alpha);
  } else if (const auto* c = system.as<CocycleExtension>()) {
    b["alpha"] = join_reals(c->alpha);
    b["linear"] = format_matrix(c->linear);
    b["shift"] = join_reals(c->shift);
  } else if (const auto* a = system.as<ToralAutomorphism>()) {
    b["matrix"] = format_matrix(a->matrix);
  } else if (const auto* h = system.as<HeisenbergTranslation>()) {
    b["alpha"] = format_real(h->alpha);
    b["beta"] = format_real(h->beta);
  }
  return b;
}

DynamicalSystem system_from_block(const KeyValues& block) {
  const std::string& kind = require_key(block, "kind");
  if (kind == "rotation") {
    require_keys_only(block, {"kind", "alpha"});
    return DynamicalSystem::rotation(parse_reals(require_key(block, "alpha"), "alpha"));
  }
  if (kind == "cocycle") {
    require_keys_only(block, {"kind", "alpha", "linear", "shift"});
    return DynamicalSystem::cocycle_extension(parse_reals(require_key(block, "alpha"), "alpha"),
                                              parse_matrix(require_key(block, "linear"), "linear"),
                                              parse_reals(require_key(block, "shift"), "shift"));
  }
  if (kind == "automorphism") {
    require_keys_only(block, {"kind", "matrix"});
    return DynamicalSystem::toral_automorphism(parse_matrix(require_key(block, "matrix"), "matrix"));
  }
  if (kind == "heisenberg") {
    require_keys_only(block, {"kind", "alpha", "beta"});
    return DynamicalSystem::heisenberg(parse_real(require_key(block, "alpha"), "alpha"),
                                       parse_real(require_key(block, "beta"), "beta"));
  }
  throw ValidationError("unknown system kind '" + kind + "'");
}

std::string system_summary(const DynamicalSystem& system) {
  const auto block = system_to_block(system);
  std::string out = block.at("kind");
  for (const auto& [k, v] : block) {
    if (k != "kind") out += " " + k + "=" + v;
  }
  return out;
}

bool same_system(const DynamicalSystem& a, const DynamicalSystem& b) {
  if (a.kind().index() != b.kind().index()) return false;
  if (const auto* r = a.as<Rotation>()) return r->alpha == b.as<Rotation>()->alpha;
  if (const auto* c = a.as<CocycleExtension>()) {
    const auto* o = b.as<CocycleExtension>();
    return c->alpha == o->alpha && c->linear == o->linear && c->shift == o->shift;
  }
  if (const auto* m = a.as<ToralAutomorphism>()) return m->matrix == b.as<ToralAutomorphism>()->matrix;
  const auto* h = a.as<HeisenbergTranslation>();
  const auto* o = b.as<HeisenbergTranslation>();
  return h->alpha == o->alpha && h->beta == o->beta;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::orbit:
      return "orbit";
    case Command::average:
      return "average";
    case Command::seminorm:
      return "seminorm";
    case Command::vdc:
      return "vdc";
    case Command::joining:
      return "joining";
    case Command::certify:
      return "certify";
  }
  return "average";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::orbit, Command::average, Command::seminorm, Command::vdc, Command::joining,
                 Command::certify}) {
    if (to_string(c) == name) return c;
  }
  throw ValidationError("unknown command '" + std::string(name) + "'");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  const bool systems2 = a.system2.has_value() == b.system2.has_value() &&
                        (!a.system2 || same_system(*a.system2, *b.system2));
  return a.name == b.name && a.command == b.command && a.scheme == b.scheme && a.d == b.d &&
         a.schedule == b.schedule && a.H == b.H && a.order == b.order && a.samples == b.samples &&
         a.seed == b.seed && a.start == b.start && a.search_bound == b.search_bound &&
         a.seminorm_mode == b.seminorm_mode && a.start_design == b.start_design &&
         a.vdc_sequence == b.vdc_sequence && a.vdc_dimension == b.vdc_dimension &&
         same_system(a.system, b.system) && systems2 && a.observables == b.observables &&
         a.tolerances.tail_fraction == b.tolerances.tail_fraction &&
         a.tolerances.vdc_epsilon == b.tolerances.vdc_epsilon && a.output_dir == b.output_dir;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::map<std::string, KeyValues> sections;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("line " + std::to_string(line_no) + ": bad section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      static const char* known[] = {"experiment", "system", "system2", "observables", "tolerances", "output"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ValidationError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      if (sections.count(section)) throw ValidationError("section [" + section + "] appears twice");
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (section.empty() || eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected key = value inside a section");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!sections[section].emplace(key, value).second) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  for (const auto& [k, v] : sections["experiment"]) apply_experiment_key(c, k, v);
  if (!sections.count("system")) throw ValidationError("config needs a [system] section");
  c.system = system_from_block(sections["system"]);
  if (sections.count("system2")) c.system2 = system_from_block(sections["system2"]);

  const auto& obs = sections["observables"];
  for (std::size_t i = 1; i <= obs.size(); ++i) {
    const auto it = obs.find("f" + std::to_string(i));
    if (it == obs.end()) throw ValidationError("observables must be named f1, f2, ... without gaps");
    c.observables.push_back(parse_observable(it->second));
  }

  for (const auto& [k, v] : sections["tolerances"]) {
    if (k == "tail_fraction") {
      c.tolerances.tail_fraction = parse_real(v, k);
    } else if (k == "vdc_epsilon") {
      c.tolerances.vdc_epsilon = parse_real(v, k);
    } else {
      throw ValidationError("unknown key '" + k + "' in [tolerances]");
    }
  }
  for (const auto& [k, v] : sections["output"]) {
    if (k != "dir") throw ValidationError("unknown key '" + k + "' in [output]");
    c.output_dir = v;
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "name = " << c.name << "\n";
  os << "command = " << to_string(c.command) << "\n";
  os << "scheme = " << to_string(c.scheme) << "\n";
  os << "d = " << c.d << "\n";
  os << "N = " << join_ints(c.schedule) << "\n";
  os << "H = " << c.H << "\n";
  os << "order = " << c.order << "\n";
  os << "samples = " << c.samples << "\n";
  if (c.seed) os << "seed = " << *c.seed << "\n";
  if (!c.start.empty()) os << "start = " << join_reals(c.start) << "\n";
  os << "search_bound = " << c.search_bound << "\n";
  os << "seminorm_mode = " << mode_name(c.seminorm_mode) << "\n";
  os << "start_design = " << design_name(c.start_design) << "\n";
  os << "vdc_sequence = " << c.vdc_sequence << "\n";
  os << "vdc_dimension = " << c.vdc_dimension << "\n";
  auto write_system = [&](const char* header, const DynamicalSystem& s) {
    os << "\n[" << header << "]\n";
    const auto block = system_to_block(s);
    os << "kind = " << block.at("kind") << "\n";
    for (const auto& [k, v] : block) {
      if (k != "kind") os << k << " = " << v << "\n";
    }
  };
  write_system("system", c.system);
  if (c.system2) write_system("system2", *c.system2);
  os << "\n[observables]\n";
  for (std::size_t i = 0; i < c.observables.size(); ++i) {
    os << "f" << i + 1 << " = " << to_literal(c.observables[i]) << "\n";
  }
  os << "\n[tolerances]\n";
  os << "tail_fraction = " << format_real(c.tolerances.tail_fraction) << "\n";
  os << "vdc_epsilon = " << format_real(c.tolerances.vdc_epsilon) << "\n";
  os << "\n[output]\n";
  os << "dir = " << c.output_dir << "\n";
  return os.str();
}

std::vector<Observable> expanded_observables(const ExperimentConfig& c) {
  const auto& fs = c.observables;
  if (fs.empty()) throw ValidationError("config has no observables");
  std::size_t want = fs.size();
  switch (c.scheme) {
    case Scheme::birkhoff:
    case Scheme::folner:
      want = 1;
      break;
    case Scheme::linear:
    case Scheme::square:
      if (c.d > 0) want = static_cast<std::size_t>(c.d);
      break;
    case Scheme::cube:
      if (c.d > 0) {
        if (c.d > kMaxCubeOrder) {
          throw ResourceError("cube order " + std::to_string(c.d) + " exceeds the cap of " +
                              std::to_string(kMaxCubeOrder));
        }
        want = (std::size_t{1} << c.d) - 1;
      }
      break;
  }
  if (fs.size() == want) return fs;
  if (fs.size() == 1) return std::vector<Observable>(want, fs.front());
  throw ValidationError("scheme " + to_string(c.scheme) + " needs " + std::to_string(want) +
                        " observables (or one to repeat), got " + std::to_string(fs.size()));
}

void validate(const ExperimentConfig& c) {
  if (c.d < 0) throw ValidationError("d must be nonnegative");
  if (c.schedule.empty()) throw ValidationError("N schedule is empty");
  if (c.schedule.front() < 1) throw ValidationError("N values must be positive");
  for (std::size_t i = 1; i < c.schedule.size(); ++i) {
    if (c.schedule[i] <= c.schedule[i - 1]) throw ValidationError("N schedule must be strictly increasing");
  }
  if (!c.start.empty()) c.system.check_point(c.start);
  if (!(c.tolerances.tail_fraction > 0.0 && c.tolerances.tail_fraction <= 1.0)) {
    throw ValidationError("tail_fraction must be in (0, 1]");
  }

  switch (c.command) {
    case Command::orbit:
    case Command::certify:
      if (c.search_bound < 1) throw ValidationError("search_bound must be positive");
      break;
    case Command::average: {
      const auto fs = expanded_observables(c);
      for (const auto& f : fs) f.check_compatible(c.system);
      if (c.scheme == Scheme::cube) cube_order(fs.size());
      if (c.scheme == Scheme::folner) {
        if (!c.system2) throw ValidationError("folner averages need a [system2] section");
        check_commuting(c.system, *c.system2, c.start.empty() ? Point(c.system.dimension(), 0.0) : c.start);
      }
      break;
    }
    case Command::seminorm:
      if (c.observables.empty()) throw ValidationError("config has no observables");
      for (const auto& f : c.observables) f.check_compatible(c.system);
      if (c.order < 1) throw ValidationError("seminorm order must be at least 1");
      if (c.H < 1) throw ValidationError("H must be at least 1");
      if (c.seminorm_mode != SeminormMode::exact && c.order > 1 && !c.seed) {
        throw ValidationError("seminorm estimates that may use Monte Carlo need an explicit seed");
      }
      break;
    case Command::vdc:
      if (c.H < 1 || c.H >= c.schedule.back()) throw ValidationError("vdc needs 1 <= H < N");
      if (c.vdc_dimension < 1) throw ValidationError("vdc_dimension must be positive");
      if (c.vdc_sequence == "orbit") {
        if (c.observables.size() != 1) throw ValidationError("orbit vdc sequences need exactly one observable");
        c.observables.front().check_compatible(c.system);
      } else if (c.vdc_sequence != "constant" && c.vdc_sequence != "linear_phase" &&
                 c.vdc_sequence != "quadratic_phase") {
        throw ValidationError("unknown vdc_sequence '" + c.vdc_sequence + "'");
      } else if (!c.system.as<Rotation>() || c.system.dimension() != 1) {
        throw ValidationError("phase vdc sequences take alpha from a one-dimensional rotation");
      }
      break;
    case Command::joining: {
      if (!c.seed) throw ValidationError("joining experiments draw random starts and need an explicit seed");
      if (c.samples < 1) throw ValidationError("samples must be positive");
      const auto fs = c.observables;
      if (fs.empty()) throw ValidationError("config has no observables");
      for (const auto& f : fs) f.check_compatible(c.system);
      const int d = c.d > 0 ? c.d : static_cast<int>(fs.size());
      if (fs.size() != 1 && fs.size() != static_cast<std::size_t>(d)) {
        throw ValidationError("joining needs d observables (or one to repeat)");
      }
      break;
    }
  }
}

}  // namespace ergo
