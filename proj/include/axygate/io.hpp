#ifndef AXYGATE_IO_HPP
#define AXYGATE_IO_HPP

#include <cstdint>
#include <string>

#include "axygate/analysis.hpp"

namespace axygate {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One self-describing run document: {crystal, qubits, design, errors, run}.
/// Frequencies are given in Hz in the file and converted to rad/s here.
struct RunConfig {
  // crystal
  double com_freq = constants::two_pi * 120e3;  // rad/s
  double ion_mass = constants::yb171_mass;
  // qubits
  double rabi = constants::two_pi * 31e3;                     // rad/s
  double zeeman_sensitivity = constants::two_pi * 14e9;       // rad/(s T)
  double field_gradient = 19.0;                               // T/m
  // design
  double target_phi = constants::pi / 4.0;
  int m = 16;
  int r_min = 30;
  int r_max = 60;
  double tolerance_alpha = 1e-3;
  double tolerance_phi = 1e-3;
  int grid_points = 200;
  // errors
  ErrorModel errors;
  // run
  SimPath path = SimPath::analytic;
  int shots = 0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  FockConfig fock;

  std::string hash_hex;  // FNV-1a of the canonical config document
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
GateSystem make_system(const RunConfig& config);
DesignSpec make_design_spec(const RunConfig& config);

/// FNV-1a 64-bit, hex-encoded.
std::string fnv1a_hex(const std::string& data);

std::string tool_version();

/// Writes via a temporary file and atomic rename; no partial outputs.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Provenance stamped into every output file.
struct OutputMeta {
  std::string version = tool_version();
  std::string config_hash;
};

std::string schedule_to_json(const PulseSchedule& schedule, const AxyParams& params,
                             const OutputMeta& meta);
std::string solution_to_json(const GateSolution& solution, double target_phi,
                             const PulseSchedule& schedule,
                             const OutputMeta& meta);
GateSolution solution_from_json(const std::string& text);

std::string fringe_to_csv(const FringeScan& scan, const OutputMeta& meta);
FringeScan fringe_from_csv(const std::string& text);

std::string counts_to_csv(const std::array<BasisCounts, 3>& counts,
                          const OutputMeta& meta);
std::array<BasisCounts, 3> counts_from_csv(const std::string& text);

std::string sweep_to_csv(const std::vector<SweepRow>& rows, const OutputMeta& meta);

std::string fringe_fit_to_json(const FringeFit& fit, const OutputMeta& meta);
std::string entanglement_to_json(const EntanglementReport& report,
                                 const OutputMeta& meta);
std::string nbar_fit_to_json(const NbarFit& fit, const OutputMeta& meta);

/// Spectrum CSV carries its model parameters so a fit can be rerun from the
/// file alone.
struct SpectrumFile {
  SidebandSpectrum spectrum;
  std::array<double, 2> eps{};
  std::array<double, 2> mode_freqs{};
  double omega = 0.0;
};

std::string spectrum_to_csv(const SpectrumFile& file, const OutputMeta& meta);
SpectrumFile spectrum_from_csv(const std::string& text);

}  // namespace axygate

#endif
