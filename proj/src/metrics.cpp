#include "tvopt/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"

#include "tvopt/error.hpp"

namespace tvopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double_field(const std::string& s, int line) {
  if (s == "nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + s + "'", line);
  }
  return v;
}

}  // namespace

const char* const kCsvHeader =
    "iter,epoch,dual_value,dual_residual,consensus_dist,primal_gap,message_count";

std::vector<MetricRow> compute_metrics(const RunTrace& trace, const AggregateObjective& agg,
                                       const CentralSolution& oracle) {
  const int n = agg.n();
  const bool dual = trace.method != Method::kDiging;
  AgentMatrix z_star(agg.dim(), n);
  for (int i = 0; i < n; ++i) z_star.col(i) = agg.local(i).gradient(oracle.y_star);

  std::vector<MetricRow> rows;
  rows.reserve(trace.records.size());
  for (const IterRecord& rec : trace.records) {
    MetricRow row;
    row.iter = rec.iter;
    row.epoch = rec.epoch;
    row.message_count = rec.message_count;
    AgentMatrix primal = rec.primal;
    if (dual && primal.size() == 0) primal = agg.conj_argmax(rec.dual_point);
    if (dual) {
      row.dual_value = rec.dual_value;
      double residual = 0.0;
      for (int i = 0; i < n; ++i) {
        residual += agg.local(i).conj_bregman(rec.dual_point.col(i), z_star.col(i));
      }
      row.dual_residual = residual;
    } else {
      row.dual_value = kNaN;
      row.dual_residual = kNaN;
    }
    row.consensus_dist = project_consensus_orth(primal).norm();
    const Vector mean = primal.rowwise().mean();
    row.primal_gap = agg.value_at(mean) - oracle.phi_star;
    if (dual) {
      // phi_i(y) - phi_i(y*) = <grad phi_i(y*), y - y*> + D_{phi_i*}(grad phi_i(y*), grad phi_i(y)).
      double gap = 0.0;
      for (int i = 0; i < n; ++i) {
        gap += z_star.col(i).dot(primal.col(i) - oracle.y_star) +
               agg.local(i).conj_bregman(z_star.col(i), rec.dual_point.col(i));
      }
      row.agent_gap = gap;
    } else {
      row.agent_gap = agg.value(primal) - oracle.phi_star;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<PotentialRow> potential_trace(const XSpaceTrace& xref, double L, double mu) {
  if (!(mu > 0.0) || !(L > mu)) throw ValidationError("potential_trace: need L > mu > 0");
  if (!xref.accelerated) throw ValidationError("potential_trace: needs an accelerated trace");
  if (!xref.common_minimizer) {
    throw ValidationError("potential_trace: epochs do not share a dual minimiser");
  }
  const double gamma = 1.0 / (std::sqrt(L / mu) - 1.0);
  const double log_growth = std::log1p(gamma);
  std::vector<int> changes = xref.change_moments;

  std::vector<PotentialRow> rows;
  rows.reserve(xref.records.size());
  for (const XSpaceRecord& r : xref.records) {
    PotentialRow row;
    row.iter = r.iter;
    const double dist = (r.z - xref.x_star).squaredNorm();
    row.psi = std::exp(r.iter * log_growth) * (r.gap + 0.5 * mu * dist);
    row.at_change = std::find(changes.begin(), changes.end(), r.iter) != changes.end();
    if (row.at_change) {
      row.change_bound = std::exp((r.iter + 1) * log_growth) * (L - mu) / mu * r.gap_next;
    }
    rows.push_back(row);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].delta_psi = k + 1 < rows.size() ? rows[k + 1].psi - rows[k].psi : kNaN;
  }
  return rows;
}

BoundCheck bound_check(const std::vector<MetricRow>& rows, const RowBound& bound,
                       const RowMeasure& measure) {
  BoundCheck out;
  bool first = true;
  for (const MetricRow& row : rows) {
    const double measured = measure ? measure(row) : row.dual_residual;
    const double slack = bound(row) - measured;
    ++out.checked;
    if (first || slack < out.min_slack) out.min_slack = slack;
    first = false;
    if (!(slack >= 0.0)) {
      out.clean = false;
      const double violation = std::isnan(slack) ? std::numeric_limits<double>::infinity() : -slack;
      out.max_violation = std::max(out.max_violation, violation);
      if (!out.first_violation) out.first_violation = row.iter;
    }
  }
  return out;
}

TraceFormat parse_trace_format(const std::string& name) {
  if (name == "csv") return TraceFormat::kCsv;
  if (name == "json") return TraceFormat::kJson;
  throw ValidationError("unknown trace format '" + name + "' (valid: csv, json)");
}

void write_csv(const std::vector<MetricRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const MetricRow& r : rows) {
    out << r.iter << ',' << r.epoch << ',' << format_double(r.dual_value) << ','
        << format_double(r.dual_residual) << ',' << format_double(r.consensus_dist) << ','
        << format_double(r.primal_gap) << ',' << r.message_count << '\n';
  }
}

void write_json(const std::vector<MetricRow>& rows, std::ostream& out) {
  auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json arr = nlohmann::json::array();
  for (const MetricRow& r : rows) {
    arr.push_back({{"iter", r.iter},
                   {"epoch", r.epoch},
                   {"dual_value", number(r.dual_value)},
                   {"dual_residual", number(r.dual_residual)},
                   {"consensus_dist", number(r.consensus_dist)},
                   {"primal_gap", number(r.primal_gap)},
                   {"message_count", r.message_count}});
  }
  out << arr.dump(2) << '\n';
}

void emit(const std::vector<MetricRow>& rows, TraceFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (format == TraceFormat::kCsv) {
    write_csv(rows, out);
  } else {
    write_json(rows, out);
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<MetricRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("missing trace header", 1);
  std::vector<MetricRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw ParseError("expected 7 fields", line_no);
    MetricRow r;
    r.iter = static_cast<int>(parse_double_field(f[0], line_no));
    r.epoch = static_cast<int>(parse_double_field(f[1], line_no));
    r.dual_value = parse_double_field(f[2], line_no);
    r.dual_residual = parse_double_field(f[3], line_no);
    r.consensus_dist = parse_double_field(f[4], line_no);
    r.primal_gap = parse_double_field(f[5], line_no);
    r.message_count = static_cast<int>(parse_double_field(f[6], line_no));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace tvopt
