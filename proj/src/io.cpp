#include "axygate/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace axygate {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) {
      throw ConfigError("config: unknown field \"" + it.key() + "\" in section \"" +
                        section + "\"");
    }
  }
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError(std::string("config: field \"") + key + "\" must be a number");
  }
  return obj[key].get<double>();
}

json meta_json(const OutputMeta& meta) {
  return json{{"version", meta.version}, {"config_hash", meta.config_hash}};
}

std::string meta_comment(const OutputMeta& meta) {
  return "# axygate " + meta.version + " config_hash=" + meta.config_hash + "\n";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

/// Lines of a CSV body, with '#' comment lines captured separately.
struct CsvDoc {
  std::vector<std::string> comments;
  std::vector<std::vector<std::string>> rows;  // header row first
};

CsvDoc parse_csv(const std::string& text) {
  CsvDoc doc;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      doc.comments.push_back(line);
    } else {
      doc.rows.push_back(split(line, ','));
    }
  }
  if (doc.rows.empty()) throw ConfigError("csv: no data rows");
  return doc;
}

double meta_value(const CsvDoc& doc, const std::string& key, double fallback,
                  bool required = false) {
  const std::string tag = key + "=";
  for (const auto& c : doc.comments) {
    const auto pos = c.find(tag);
    if (pos != std::string::npos) {
      return std::stod(c.substr(pos + tag.size()));
    }
  }
  if (required) throw ConfigError("csv: missing metadata field " + key);
  return fallback;
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string tool_version() { return AXYGATE_VERSION; }

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(doc, "<root>", {"crystal", "qubits", "design", "errors", "run"});

  RunConfig cfg;
  const json crystal = doc.value("crystal", json::object());
  check_keys(crystal, "crystal", {"com_freq_hz", "ion_mass_amu"});
  cfg.com_freq = constants::two_pi * get_num(crystal, "com_freq_hz", 120e3);
  cfg.ion_mass = constants::amu * get_num(crystal, "ion_mass_amu", 171.0);
  if (!(cfg.com_freq > 0.0) || !(cfg.ion_mass > 0.0)) {
    throw ConfigError("config: crystal frequencies and mass must be positive");
  }

  const json qubits = doc.value("qubits", json::object());
  check_keys(qubits, "qubits",
             {"rabi_hz", "zeeman_sensitivity_hz_per_t", "field_gradient_t_per_m"});
  cfg.rabi = constants::two_pi * get_num(qubits, "rabi_hz", 31e3);
  cfg.zeeman_sensitivity =
      constants::two_pi * get_num(qubits, "zeeman_sensitivity_hz_per_t", 14e9);
  cfg.field_gradient = get_num(qubits, "field_gradient_t_per_m", 19.0);
  if (!(cfg.rabi > 0.0)) throw ConfigError("config: rabi_hz must be positive");

  const json design = doc.value("design", json::object());
  check_keys(design, "design",
             {"target_phi_rad", "m", "r_min", "r_max", "tolerance_alpha",
              "tolerance_phi", "grid_points"});
  cfg.target_phi = get_num(design, "target_phi_rad", constants::pi / 4.0);
  cfg.m = int(get_num(design, "m", 16));
  cfg.r_min = int(get_num(design, "r_min", 30));
  cfg.r_max = int(get_num(design, "r_max", 60));
  cfg.tolerance_alpha = get_num(design, "tolerance_alpha", 1e-3);
  cfg.tolerance_phi = get_num(design, "tolerance_phi", 1e-3);
  cfg.grid_points = int(get_num(design, "grid_points", 200));

  const json errors = doc.value("errors", json::object());
  check_keys(errors, "errors",
             {"nbar", "trap_freq_offset", "area_error", "timing_error",
              "readout_fidelity"});
  if (errors.contains("nbar")) {
    const json& nb = errors["nbar"];
    if (!nb.is_array() || nb.size() != 2) {
      throw ConfigError("config: errors.nbar must be a two-element array");
    }
    cfg.errors.nbar = {nb[0].get<double>(), nb[1].get<double>()};
  }
  cfg.errors.trap_freq_offset = get_num(errors, "trap_freq_offset", 0.0);
  cfg.errors.area_error = get_num(errors, "area_error", 0.0);
  cfg.errors.timing_error = get_num(errors, "timing_error", 0.0);
  if (errors.contains("readout_fidelity")) {
    const json& rf = errors["readout_fidelity"];
    check_keys(rf, "errors.readout_fidelity", {"dark", "bright"});
    for (int q = 0; q < 2; ++q) {
      const double dark =
          rf.contains("dark") ? rf["dark"].at(q).get<double>() : 1.0;
      const double bright =
          rf.contains("bright") ? rf["bright"].at(q).get<double>() : 1.0;
      cfg.errors.readout_confusion[q] = confusion_from_fidelities(dark, bright);
    }
  }
  cfg.errors.validate();

  const json run = doc.value("run", json::object());
  check_keys(run, "run", {"path", "shots", "seed", "out_dir", "fock"});
  const std::string path = run.value("path", "analytic");
  if (path == "analytic") {
    cfg.path = SimPath::analytic;
  } else if (path == "oracle") {
    cfg.path = SimPath::oracle;
  } else {
    throw ConfigError("config: run.path must be \"analytic\" or \"oracle\"");
  }
  cfg.shots = int(get_num(run, "shots", 0));
  if (cfg.shots < 0) throw ConfigError("config: run.shots must be >= 0");
  if (cfg.shots > 0 && !run.contains("seed")) {
    throw ConfigError("config: run.seed is required when shots > 0");
  }
  cfg.seed = std::uint64_t(get_num(run, "seed", 0));
  cfg.out_dir = run.value("out_dir", ".");
  const json fock = run.value("fock", json::object());
  check_keys(fock, "run.fock",
             {"cutoff_per_mode", "integrator_step_s", "resolved_pulses"});
  cfg.fock.cutoff_per_mode = int(get_num(fock, "cutoff_per_mode", 20));
  cfg.fock.integrator_step = get_num(fock, "integrator_step_s", 0.0);
  if (fock.contains("resolved_pulses")) {
    cfg.fock.resolved_pulses = fock["resolved_pulses"].get<bool>();
  }

  cfg.hash_hex = fnv1a_hex(doc.dump());
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

GateSystem make_system(const RunConfig& config) {
  GateSystem sys;
  sys.crystal = make_crystal(config.com_freq, config.ion_mass);
  sys.qubits = make_qubits(config.rabi, config.zeeman_sensitivity,
                           config.field_gradient);
  sys.couplings = coupling_constants(sys.crystal, sys.qubits);
  return sys;
}

DesignSpec make_design_spec(const RunConfig& config) {
  const GateSystem sys = make_system(config);
  DesignSpec spec;
  spec.target_phi = config.target_phi;
  spec.m = config.m;
  spec.r_min = config.r_min;
  spec.r_max = config.r_max;
  spec.crystal = sys.crystal;
  spec.qubits = sys.qubits;
  spec.couplings = sys.couplings;
  spec.tolerance_alpha = config.tolerance_alpha;
  spec.tolerance_phi = config.tolerance_phi;
  spec.grid_points = config.grid_points;
  return spec;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string schedule_to_json(const PulseSchedule& schedule, const AxyParams& params,
                             const OutputMeta& meta) {
  json doc;
  doc["meta"] = meta_json(meta);
  doc["header"] = {{"tau_s", params.tau},
                   {"tau_a_s", params.tau_a},
                   {"tau_b_s", params.tau_b},
                   {"m", params.m},
                   {"r", params.r},
                   {"total_time_s", schedule.total_time}};
  json pulses = json::array();
  for (const auto& p : schedule.pulses) {
    pulses.push_back({{"center_s", p.center},
                      {"duration_s", p.duration},
                      {"phase_rad", p.phase},
                      {"angle_rad", p.angle},
                      {"channel", p.channel}});
  }
  doc["pulses"] = pulses;
  return doc.dump(2) + "\n";
}

std::string solution_to_json(const GateSolution& solution, double target_phi,
                             const PulseSchedule& schedule,
                             const OutputMeta& meta) {
  json doc = json::parse(schedule_to_json(schedule, solution.params, meta));
  json residual = json::array();
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      residual.push_back({solution.residual_alpha(j, k).real(),
                          solution.residual_alpha(j, k).imag()});
    }
  }
  doc["solution"] = {{"phi_target_rad", target_phi},
                     {"phi_achieved_rad", solution.phi_achieved},
                     {"residual_alpha", residual},
                     {"gate_time_s", solution.gate_time},
                     {"diagnostics", solution.diagnostics}};
  return doc.dump(2) + "\n";
}

GateSolution solution_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("solution file: ") + e.what());
  }
  if (!doc.contains("header") || !doc.contains("solution")) {
    throw ConfigError("solution file: missing header or solution section");
  }
  GateSolution sol;
  const json& h = doc["header"];
  sol.params.tau = h.at("tau_s").get<double>();
  sol.params.tau_a = h.at("tau_a_s").get<double>();
  sol.params.tau_b = h.at("tau_b_s").get<double>();
  sol.params.m = h.at("m").get<int>();
  sol.params.r = h.at("r").get<int>();
  const json& s = doc["solution"];
  sol.phi_achieved = s.at("phi_achieved_rad").get<double>();
  sol.gate_time = s.at("gate_time_s").get<double>();
  const json& residual = s.at("residual_alpha");
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const json& entry = residual.at(2 * j + k);
      sol.residual_alpha(j, k) = {entry.at(0).get<double>(),
                                  entry.at(1).get<double>()};
    }
  }
  if (s.contains("diagnostics")) sol.diagnostics = s["diagnostics"].get<std::string>();
  sol.params.validate();
  return sol;
}

std::string fringe_to_csv(const FringeScan& scan, const OutputMeta& meta) {
  std::ostringstream out;
  out << meta_comment(meta);
  out << "# control_state=" << scan.control_state << " shots=" << scan.shots
      << "\n";
  out << "phase_rad,population\n";
  for (std::size_t i = 0; i < scan.phases.size(); ++i) {
    out << fmt(scan.phases[i]) << ',' << fmt(scan.populations[i]) << '\n';
  }
  return out.str();
}

FringeScan fringe_from_csv(const std::string& text) {
  const CsvDoc doc = parse_csv(text);
  if (doc.rows.front() != std::vector<std::string>{"phase_rad", "population"}) {
    throw ConfigError("fringe csv: unexpected header");
  }
  FringeScan scan;
  scan.control_state = int(meta_value(doc, "control_state", 0));
  scan.shots = int(meta_value(doc, "shots", 0));
  for (std::size_t i = 1; i < doc.rows.size(); ++i) {
    if (doc.rows[i].size() != 2) throw ConfigError("fringe csv: malformed row");
    scan.phases.push_back(std::stod(doc.rows[i][0]));
    scan.populations.push_back(std::stod(doc.rows[i][1]));
  }
  return scan;
}

std::string counts_to_csv(const std::array<BasisCounts, 3>& counts,
                          const OutputMeta& meta) {
  std::ostringstream out;
  out << meta_comment(meta);
  out << "basis,shots,p00,p01,p10,p11,n00,n01,n10,n11\n";
  for (const auto& bc : counts) {
    out << bc.basis << ',' << bc.shots;
    for (double p : bc.probs) out << ',' << fmt(p);
    for (auto n : bc.counts) out << ',' << n;
    out << '\n';
  }
  return out.str();
}

std::array<BasisCounts, 3> counts_from_csv(const std::string& text) {
  const CsvDoc doc = parse_csv(text);
  if (doc.rows.size() != 4) {
    throw ConfigError("counts csv: expected three basis rows");
  }
  std::array<BasisCounts, 3> out;
  for (int i = 0; i < 3; ++i) {
    const auto& row = doc.rows[i + 1];
    if (row.size() != 10) throw ConfigError("counts csv: malformed row");
    out[i].basis = row[0].at(0);
    out[i].shots = std::stoll(row[1]);
    for (int j = 0; j < 4; ++j) out[i].probs[j] = std::stod(row[2 + j]);
    for (int j = 0; j < 4; ++j) out[i].counts[j] = std::stoll(row[6 + j]);
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, const OutputMeta& meta) {
  std::ostringstream out;
  out << meta_comment(meta);
  out << "axis,value,control_state,contrast,contrast_err,phase_rad,phase_err,"
         "normalized_contrast,normalized_phase\n";
  for (const auto& r : rows) {
    out << r.axis << ',' << fmt(r.value) << ',' << r.control_state << ','
        << fmt(r.contrast) << ',' << fmt(r.contrast_err) << ','
        << fmt(r.phase_rad) << ',' << fmt(r.phase_err) << ','
        << fmt(r.normalized_contrast) << ',' << fmt(r.normalized_phase) << '\n';
  }
  return out.str();
}

std::string fringe_fit_to_json(const FringeFit& fit, const OutputMeta& meta) {
  json doc;
  doc["meta"] = meta_json(meta);
  doc["fringe_fit"] = {
      {"contrast", fit.contrast},
      {"phase_rad", fit.phase},
      {"offset", fit.offset},
      {"contrast_sigma", std::sqrt(std::max(0.0, fit.covariance(1, 1)))},
      {"phase_sigma", std::sqrt(std::max(0.0, fit.covariance(2, 2)))},
      {"offset_sigma", std::sqrt(std::max(0.0, fit.covariance(0, 0)))},
      {"residual_rms", fit.residual_rms}};
  return doc.dump(2) + "\n";
}

std::string entanglement_to_json(const EntanglementReport& report,
                                 const OutputMeta& meta) {
  json doc;
  doc["meta"] = meta_json(meta);
  doc["entanglement"] = {{"xx", report.xx.value},
                         {"yy", report.yy.value},
                         {"zz", report.zz.value},
                         {"fidelity", report.fidelity},
                         {"neg_bound", report.neg_bound},
                         {"uncertainties",
                          {{"xx", report.xx.sigma},
                           {"yy", report.yy.sigma},
                           {"zz", report.zz.sigma},
                           {"fidelity", report.fidelity_sigma},
                           {"neg_bound", report.neg_bound_sigma}}},
                         {"clamped", report.clamped}};
  return doc.dump(2) + "\n";
}

std::string nbar_fit_to_json(const NbarFit& fit, const OutputMeta& meta) {
  json doc;
  doc["meta"] = meta_json(meta);
  doc["nbar_fit"] = {{"nbar", fit.nbar},
                     {"sigma", fit.sigma},
                     {"residual_rms", fit.residual_rms}};
  return doc.dump(2) + "\n";
}

std::string spectrum_to_csv(const SpectrumFile& file, const OutputMeta& meta) {
  std::ostringstream out;
  out << meta_comment(meta);
  out << "# pulse_time_s=" << fmt(file.spectrum.pulse_time)
      << " omega_rad_s=" << fmt(file.omega) << " eps1=" << fmt(file.eps[0])
      << " eps2=" << fmt(file.eps[1]) << " nu1_rad_s=" << fmt(file.mode_freqs[0])
      << " nu2_rad_s=" << fmt(file.mode_freqs[1]) << "\n";
  out << "detuning_rad_s,excitation\n";
  for (std::size_t i = 0; i < file.spectrum.detunings.size(); ++i) {
    out << fmt(file.spectrum.detunings[i]) << ','
        << fmt(file.spectrum.excitation[i]) << '\n';
  }
  return out.str();
}

SpectrumFile spectrum_from_csv(const std::string& text) {
  const CsvDoc doc = parse_csv(text);
  if (doc.rows.front() !=
      std::vector<std::string>{"detuning_rad_s", "excitation"}) {
    throw ConfigError("spectrum csv: unexpected header");
  }
  SpectrumFile file;
  file.spectrum.pulse_time = meta_value(doc, "pulse_time_s", 0.0, true);
  file.omega = meta_value(doc, "omega_rad_s", 0.0, true);
  file.eps = {meta_value(doc, "eps1", 0.0, true), meta_value(doc, "eps2", 0.0, true)};
  file.mode_freqs = {meta_value(doc, "nu1_rad_s", 0.0, true),
                     meta_value(doc, "nu2_rad_s", 0.0, true)};
  for (std::size_t i = 1; i < doc.rows.size(); ++i) {
    if (doc.rows[i].size() != 2) throw ConfigError("spectrum csv: malformed row");
    file.spectrum.detunings.push_back(std::stod(doc.rows[i][0]));
    file.spectrum.excitation.push_back(std::stod(doc.rows[i][1]));
  }
  return file;
}

}  // namespace axygate
