#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jdisc/extremal.hpp"
#include "jdisc/solver.hpp"

namespace jdisc::cli {

using nlohmann::json;

/// Malformed or inconsistent configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSection {
  int n_radial = 16;
  int n_angular = 32;
  std::vector<std::pair<int, int>> refinements;
};

struct StructureSection {
  std::string name = "standard";
  std::vector<double> params;
};

/// The prescribed disc. "holomorphic": the holomorphic data h is the
/// polynomial itself. "pullback_preimage": the ground truth is
/// Phi^{-1} o w for the pullback structure and h = F(truth).
struct DiscSection {
  std::string kind = "holomorphic";
  std::vector<std::vector<cplx>> coefficients;  // per component, increasing degree
};

/// Variational field: "fx", "fy", or "phi" (phi_times_fprime with phi from
/// coefficients or from boundary samples of Re phi).
struct FieldSection {
  std::string kind = "fx";
  std::vector<cplx> phi_coefficients;
  std::vector<double> phi_boundary;
  double max_residual = 1e-6;
};

struct FamilySection {
  std::vector<double> t_values;
  bool normalized = false;
};

struct ProbeSection {
  std::string domain = "ball";
  std::vector<double> domain_params;
  ProbeConfig probe;
};

struct OutputSection {
  bool csv = true;
  bool include_discs = false;
};

struct Config {
  GridSection grid;
  StructureSection structure;
  DiscSection disc;
  FieldSection field;
  FamilySection family;
  std::optional<ProbeSection> probe;
  NewtonConfig newton;
  CorrectionOptions correction;
  OutputSection output;
};

/// Parse and validate; throws ConfigError.
Config parse_config(const json& doc);
Config load_config(const std::string& path);

}  // namespace jdisc::cli
