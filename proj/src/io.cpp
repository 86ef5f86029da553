#include "landau/io.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace landau {
namespace fs = std::filesystem;
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void config_error(const std::string& key, const std::string& msg) {
  throw std::invalid_argument("config key '" + key + "': " + msg);
}

double to_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0') config_error(key, "expected a real number, got '" + value + "'");
  return x;
}

int to_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long x = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || *end != '\0') config_error(key, "expected an integer, got '" + value + "'");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  config_error(key, "expected true or false, got '" + value + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& value, std::size_t count) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.size() != count) config_error(key, "expected " + std::to_string(count) + " comma-separated values");
  return out;
}

const std::set<std::string> kCommonKeys{"n", "L", "t_end", "p", "m", "initial", "cfl", "snapshot_every",
                                        "clip_negatives", "coefficient_refresh"};
const std::map<std::string, std::set<std::string>> kFamilyKeys{
    {"maxwellian", {}},
    {"perturbed_maxwellian", {"amplitude", "mode"}},
    {"anisotropic_gaussian", {"temperatures"}},
    {"two_bump", {"separation", "weights"}},
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> parse_pairs(const std::string& text, const std::string& where) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(where + " line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) throw std::invalid_argument(where + ": duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::string snapshot_stem(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%05zu", i);
  return buf;
}

std::uint64_t to_little(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  std::uint64_t r = 0;
  for (int b = 0; b < 8; ++b) r |= ((x >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return r;
}

}  // namespace

SimConfig parse_config_text(const std::string& text) {
  const auto kv = parse_pairs(text, "config");
  for (const char* key : {"n", "L", "t_end", "p", "m", "initial"}) {
    if (!kv.count(key)) config_error(key, "required key is missing");
  }
  const std::string family = kv.at("initial");
  const auto fam = kFamilyKeys.find(family);
  if (fam == kFamilyKeys.end()) {
    config_error("initial", "expected one of maxwellian, perturbed_maxwellian, anisotropic_gaussian, two_bump");
  }
  for (const auto& [key, value] : kv) {
    if (kCommonKeys.count(key) || fam->second.count(key)) continue;
    bool other_family = false;
    for (const auto& [name, keys] : kFamilyKeys) other_family = other_family || keys.count(key);
    if (other_family) config_error(key, "not valid for initial = " + family);
    config_error(key, "unknown key");
  }

  SimConfig c;
  c.n = to_int("n", kv.at("n"));
  c.extent = to_double("L", kv.at("L"));
  c.t_end = to_double("t_end", kv.at("t_end"));
  c.p = to_double("p", kv.at("p"));
  c.m = to_double("m", kv.at("m"));
  if (kv.count("cfl")) c.cfl = to_double("cfl", kv.at("cfl"));
  if (kv.count("snapshot_every")) c.snapshot_every = to_int("snapshot_every", kv.at("snapshot_every"));
  if (kv.count("clip_negatives")) c.clip_negatives = to_bool("clip_negatives", kv.at("clip_negatives"));
  if (kv.count("coefficient_refresh")) c.coefficient_refresh = to_int("coefficient_refresh", kv.at("coefficient_refresh"));

  auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (family == "maxwellian") {
    c.initial = Maxwellian{};
  } else if (family == "perturbed_maxwellian") {
    PerturbedMaxwellian d;
    if (const auto* v = get("amplitude")) d.amplitude = to_double("amplitude", *v);
    if (const auto* v = get("mode")) d.mode = to_int("mode", *v);
    c.initial = d;
  } else if (family == "anisotropic_gaussian") {
    AnisotropicGaussian d;
    if (const auto* v = get("temperatures")) {
      const auto t = to_list("temperatures", *v, 3);
      d.temperatures = {t[0], t[1], t[2]};
    }
    c.initial = d;
  } else {
    TwoBump d;
    if (const auto* v = get("separation")) d.separation = to_double("separation", *v);
    if (const auto* v = get("weights")) {
      const auto w = to_list("weights", *v, 2);
      d.weights = {w[0], w[1]};
    }
    c.initial = d;
  }

  // Re-phrase range errors with the key name in front.
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto sp = msg.find(' ');
    config_error(msg.substr(0, sp), msg);
  }
  return c;
}

SimConfig parse_config(const fs::path& path) {
  if (!fs::exists(path)) throw std::runtime_error("config file not found: " + path.string());
  return parse_config_text(read_file(path));
}

std::string format_config(const SimConfig& c) {
  std::ostringstream os;
  os << "n = " << c.n << "\n"
     << "L = " << fmt(c.extent) << "\n"
     << "t_end = " << fmt(c.t_end) << "\n"
     << "p = " << fmt(c.p) << "\n"
     << "m = " << fmt(c.m) << "\n"
     << "cfl = " << fmt(c.cfl) << "\n"
     << "snapshot_every = " << c.snapshot_every << "\n"
     << "clip_negatives = " << (c.clip_negatives ? "true" : "false") << "\n"
     << "coefficient_refresh = " << c.coefficient_refresh << "\n"
     << "initial = " << datum_name(c.initial) << "\n";
  if (const auto* d = std::get_if<PerturbedMaxwellian>(&c.initial)) {
    os << "amplitude = " << fmt(d->amplitude) << "\nmode = " << d->mode << "\n";
  } else if (const auto* d = std::get_if<AnisotropicGaussian>(&c.initial)) {
    os << "temperatures = " << fmt(d->temperatures[0]) << ", " << fmt(d->temperatures[1]) << ", "
       << fmt(d->temperatures[2]) << "\n";
  } else if (const auto* d = std::get_if<TwoBump>(&c.initial)) {
    os << "separation = " << fmt(d->separation) << "\nweights = " << fmt(d->weights[0]) << ", " << fmt(d->weights[1])
       << "\n";
  }
  return os.str();
}

std::string scalars_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "time,dt,mass,momentum_x,momentum_y,momentum_z,energy,entropy,lp_p,linf_h,grad_energy,c0\n";
  for (const auto& r : traj.scalars) {
    const double row[kScalarColumns] = {r.time,   r.dt,      r.mass, r.momentum[0], r.momentum[1], r.momentum[2],
                                        r.energy, r.entropy, r.lp_p, r.linf_h,      r.grad_energy, r.c0};
    for (int i = 0; i < kScalarColumns; ++i) os << (i ? "," : "") << fmt(row[i]);
    os << "\n";
  }
  return os.str();
}

void write_trajectory(const Trajectory& traj, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / kScalarsFile, scalars_csv(traj));

  std::ostringstream meta;
  meta << "n = " << traj.grid.n() << "\nL = " << fmt(traj.grid.extent()) << "\np = " << fmt(traj.p)
       << "\nm = " << fmt(traj.m) << "\nsnapshots = " << traj.snapshots.size() << "\nclipped_mass = ";
  for (std::size_t i = 0; i < traj.clipped_mass.size(); ++i) meta << (i ? "," : "") << fmt(traj.clipped_mass[i]);
  meta << "\n";
  if (traj.abort_time) meta << "abort_time = " << fmt(*traj.abort_time) << "\nabort_reason = " << traj.abort_reason << "\n";
  write_file(dir / kTrajectoryMetaFile, meta.str());

  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const auto vals = traj.snapshots[s].values();
    std::string bytes(vals.size() * 8, '\0');
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const std::uint64_t le = to_little(std::bit_cast<std::uint64_t>(vals[i]));
      std::memcpy(bytes.data() + 8 * i, &le, 8);
    }
    write_file(dir / (snapshot_stem(s) + ".bin"), bytes);
    std::ostringstream side;
    side << "n = " << traj.grid.n() << "\nL = " << fmt(traj.grid.extent()) << "\ntime = " << fmt(traj.times[s]) << "\n";
    write_file(dir / (snapshot_stem(s) + ".txt"), side.str());
  }
}

Trajectory read_trajectory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("trajectory directory not found: " + dir.string());
  const auto meta = parse_pairs(read_file(dir / kTrajectoryMetaFile), kTrajectoryMetaFile);
  auto need = [&](const char* key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw std::runtime_error(std::string(kTrajectoryMetaFile) + ": missing '" + key + "'");
    return it->second;
  };
  const int n = std::stoi(need("n"));
  const double L = std::strtod(need("L").c_str(), nullptr);
  Trajectory traj(Grid(n, L), std::strtod(need("p").c_str(), nullptr), std::strtod(need("m").c_str(), nullptr));
  const std::size_t count = std::stoul(need("snapshots"));
  if (const std::string& cm = need("clipped_mass"); !cm.empty()) {
    std::stringstream ss(cm);
    std::string item;
    while (std::getline(ss, item, ',')) traj.clipped_mass.push_back(std::strtod(item.c_str(), nullptr));
  }
  if (meta.count("abort_time")) {
    traj.abort_time = std::strtod(meta.at("abort_time").c_str(), nullptr);
    traj.abort_reason = meta.count("abort_reason") ? meta.at("abort_reason") : "";
  }

  std::istringstream csv(read_file(dir / kScalarsFile));
  std::string line;
  std::getline(csv, line);
  if (std::count(line.begin(), line.end(), ',') != kScalarColumns - 1) {
    throw std::runtime_error("scalars.csv: expected 12 columns");
  }
  while (std::getline(csv, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::strtod(item.c_str(), nullptr));
    if (v.size() != static_cast<std::size_t>(kScalarColumns)) throw std::runtime_error("scalars.csv: malformed row");
    StepScalars r;
    r.time = v[0];
    r.dt = v[1];
    r.mass = v[2];
    r.momentum = {v[3], v[4], v[5]};
    r.energy = v[6];
    r.entropy = v[7];
    r.lp_p = v[8];
    r.linf_h = v[9];
    r.grad_energy = v[10];
    r.c0 = v[11];
    traj.scalars.push_back(r);
  }

  for (std::size_t s = 0; s < count; ++s) {
    const auto side = parse_pairs(read_file(dir / (snapshot_stem(s) + ".txt")), snapshot_stem(s) + ".txt");
    if (!side.count("n") || !side.count("L") || !side.count("time")) {
      throw std::runtime_error(snapshot_stem(s) + ".txt: incomplete sidecar");
    }
    if (std::stoi(side.at("n")) != n || std::strtod(side.at("L").c_str(), nullptr) != L) {
      throw std::runtime_error(snapshot_stem(s) + ": grid (n, L) does not match the trajectory");
    }
    const std::string bytes = read_file(dir / (snapshot_stem(s) + ".bin"));
    if (bytes.size() != traj.grid.size() * 8) throw std::runtime_error(snapshot_stem(s) + ".bin: size does not match n^3");
    Field f(traj.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::uint64_t le;
      std::memcpy(&le, bytes.data() + 8 * i, 8);
      f[i] = std::bit_cast<double>(to_little(le));
    }
    traj.times.push_back(std::strtod(side.at("time").c_str(), nullptr));
    traj.snapshots.push_back(std::move(f));
  }
  return traj;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string version_string() { return "landau 0.1.0"; }

void write_manifest(const RunManifest& manifest, const fs::path& dir) {
  nlohmann::json j;
  j["version"] = manifest.version;
  j["start_time"] = manifest.start_time;
  j["end_time"] = manifest.end_time;
  j["config"] = format_config(manifest.config);
  j["outputs"] = manifest.outputs;
  j["abort_reason"] = manifest.abort_reason ? nlohmann::json(*manifest.abort_reason) : nlohmann::json(nullptr);
  fs::create_directories(dir);
  const fs::path tmp = dir / "manifest.json.tmp";
  write_file(tmp, j.dump(2) + "\n");
  fs::rename(tmp, dir / "manifest.json");
}

}  // namespace landau
