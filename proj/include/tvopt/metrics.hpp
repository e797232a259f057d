#pragma once

// Per-iteration diagnostics, potential-function traces, bound checks and trace files.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tvopt/algorithms.hpp"
#include "tvopt/objectives.hpp"

namespace tvopt {

struct MetricRow {
  int iter = 0;
  int epoch = 0;
  double dual_value = 0.0;      // sum_i phi_i*(z~_i); NaN for primal methods
  double dual_residual = 0.0;   // dual_value - f*; NaN for primal methods
  double consensus_dist = 0.0;
  double primal_gap = 0.0;      // phi(mean column) - phi*
  int message_count = 0;
  double agent_gap = 0.0;       // sum_i phi_i(y~_i) - phi*, not written to files
};

/// dual_residual is evaluated as sum_i of the Bregman divergence of phi_i* between
/// z~_i and grad phi_i(y*). On iterates whose columns sum to zero this equals
/// dual_value - f* exactly, without the cancellation of subtracting two O(1) numbers.
/// agent_gap of dual methods uses the matching Bregman identity for each phi_i.
std::vector<MetricRow> compute_metrics(const RunTrace& trace, const AggregateObjective& agg,
                                       const CentralSolution& oracle);

struct PotentialRow {
  int iter = 0;
  double psi = 0.0;
  double delta_psi = 0.0;     // psi_{k+1} - psi_k; NaN on the last row
  bool at_change = false;     // the function changes between k and k+1
  double change_bound = 0.0;  // (1+gamma)^{k+1} ((L-mu)/mu) (f_k(y_{k+1}) - f*) on change rows
};

/// psi_k = (1+gamma)^k (f_k(y_k) - f* + mu/2 ||z_k - x*||^2) with gamma = 1/(sqrt(L/mu) - 1).
/// Needs an accelerated trace, L > mu, and a minimiser shared by every epoch.
std::vector<PotentialRow> potential_trace(const XSpaceTrace& xref, double L, double mu);

struct BoundCheck {
  bool clean = true;
  double max_violation = 0.0;           // max(0, measured - bound)
  double min_slack = 0.0;               // min(bound - measured); 0 for an empty input
  std::optional<int> first_violation;   // iteration
  int checked = 0;
};

using RowBound = std::function<double(const MetricRow&)>;
using RowMeasure = std::function<double(const MetricRow&)>;

/// Compares measure(row) (default dual_residual) against bound(row) for each row.
BoundCheck bound_check(const std::vector<MetricRow>& rows, const RowBound& bound,
                       const RowMeasure& measure = {});

enum class TraceFormat { kCsv, kJson };

TraceFormat parse_trace_format(const std::string& name);

extern const char* const kCsvHeader;

void write_csv(const std::vector<MetricRow>& rows, std::ostream& out);
void write_json(const std::vector<MetricRow>& rows, std::ostream& out);
/// Writes rows to `path`; IoError names the path on failure.
void emit(const std::vector<MetricRow>& rows, TraceFormat format, const std::filesystem::path& path);
/// Reads a CSV produced by write_csv (agent_gap is not stored and reads back as 0).
std::vector<MetricRow> read_csv(std::istream& in);

}  // namespace tvopt
