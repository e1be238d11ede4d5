#pragma once

#include <map>
#include <optional>
#include <string>

#include "lqgame/model.hpp"

namespace lqgame {

/**
 * Parsed form of a config file before expansion into per-stage lists.  Kept
 * separate from GameSpec so parameter sweeps can replace a base value (say
 * Ra) and rebuild, leaving stage overrides intact.
 *
 * File syntax: one "key = value" per line, '#' comments, values are numbers,
 * bare identifiers, nested row-major arrays ("A = [[0.9, 0.1], [0.0, 0.8]]"),
 * or stage-override maps ("Rd_overrides = {29: [[10.0]]}").  Arrays may span
 * lines.  A bare number is shorthand for a 1x1 matrix (or length-1 vector).
 */
struct ConfigDoc {
  int horizon = 0;
  MatrixXd A, Bd, Ba, C, D, E, sigma_s, sigma_o;

  std::optional<VectorXd> x0_known;  // exactly known initial state
  std::optional<VectorXd> x0_mean;   // Gaussian initial state ...
  std::optional<MatrixXd> x0_cov;    // ... with this covariance

  MatrixXd Q, Q_N, Rd, Ra;
  double Od = 0.0, Oa = 0.0;
  std::map<int, MatrixXd> Q_overrides, Rd_overrides, Ra_overrides;
  std::map<int, double> Od_overrides, Oa_overrides;

  InfoStructure info_structure = InfoStructure::DefenderLeads;
};

/** Parses config text.  Throws ParseError with line/field location. */
ConfigDoc parse_config(const std::string& text);

/** Reads and parses a config file.  Throws ParseError. */
ConfigDoc parse_config_file(const std::string& path);

/** Expands a ConfigDoc into per-stage lists.  Throws ParseError on bad
 * override indices. */
GameSpec build_spec(const ConfigDoc& doc);

/**
 * Parses, expands and validates in one step; the result is ready for the
 * solver.  Throws ParseError, with all validation messages aggregated.
 */
GameSpec parse_spec(const std::string& text);
GameSpec parse_spec_file(const std::string& path);

/**
 * Canonical text form: fixed key order, matrices as nested arrays, constant
 * per-stage costs as a base value plus overrides for deviating stages, and
 * shortest round-trippable number formatting.  parse_spec(serialize_spec(s))
 * reproduces s field for field.
 */
std::string serialize_spec(const GameSpec& spec);

/** Shortest decimal form of v that parses back to exactly v; used for all
 * emitted configs and CSVs so outputs are byte-stable. */
std::string format_number(double v);

}  // namespace lqgame
