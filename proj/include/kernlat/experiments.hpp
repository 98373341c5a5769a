#pragma once

// Experiment grids behind the convergence, dimension and cross-evaluation
// studies, plus their CSV / two-column plot-file output.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kernlat/cbc.hpp"
#include "kernlat/criteria.hpp"
#include "kernlat/korobov_space.hpp"

namespace kernlat {

struct ExperimentConfig {
  std::set<CriterionKind> criteria{CriterionKind::S, CriterionKind::P};
  int m_from = 7;  // convergence: n = 2^m_from .. 2^m_to
  int m_to = 11;
  int m = 10;      // dimension study: n = 2^m
  int d = 10;      // convergence dimension
  int d_max = 10;  // dimension study: prefixes 1..d_max
  int alpha = 1;
  ProductWeights weights = ProductWeights::poly3alpha();
  int precision_bits = 256;  // P constructions and evaluations
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool timings = true;  // false writes 0 so reruns are byte-identical

  /// Throws InvalidArgumentError on m < 1, d < 1, precision < 53 or m_from > m_to.
  void validate() const;
};

/// Kind labels: "S_zS", "S_zP", "P_zS", "P_zP" (criterion, then vector).
struct ExperimentRecord {
  std::string kind;
  long n = 0;
  int d = 0;
  int alpha = 0;
  std::string weights;
  int precision_bits = 0;
  double value = 0.0;
  double construct_s = 0.0;
  double eval_s = 0.0;
};

/// Kinds produced for a criterion set: {S} -> S_zS, {P} -> P_zP, both -> all four.
std::vector<std::string> experiment_kinds(const std::set<CriterionKind>& criteria);

std::vector<ExperimentRecord> run_convergence(const ExperimentConfig& config);
std::vector<ExperimentRecord> run_dimension(const ExperimentConfig& config);

/// Least-squares slope of log(value) against log(n); throws
/// InvalidArgumentError on fewer than two points or nonpositive entries.
double fit_slope(const std::vector<std::pair<double, double>>& points);

enum class StudyKind { Convergence, Dimension };

/// Writes <out_dir>/convergence.csv and <kind>_<alpha>_<d>_<weights>.txt
/// (lines "<n> <value>"), or <out_dir>/dimension.csv and
/// dim_<kind>_<alpha>_<n>_<weights>.txt (lines "<d> <value>"). Records are
/// sorted by (kind, n, d) first. Returns the written paths.
std::vector<std::string> emit_outputs(std::vector<ExperimentRecord> records,
                                      const ExperimentConfig& config, StudyKind study);

std::string csv_header();

}  // namespace kernlat
