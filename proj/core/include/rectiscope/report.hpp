#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "rectiscope/beta.hpp"
#include "rectiscope/density.hpp"
#include "rectiscope/rectify.hpp"

namespace rectiscope {

// JSON is the canonical report format; CSV carries the same rows flattened.
// Both are byte-for-byte deterministic for identical inputs.

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(const std::string& name);

/// Rows: region, level, mass, beta, normalization, converged.
void write_beta_report(std::ostream& out, std::span<const BetaResult> rows, ReportFormat format);

/// Rows: atom, S_K, last increment, window ratio, classification.
void write_ssum_report(std::ostream& out, const SsumReport& report, ReportFormat format);

/// Rows: atom, k, ratio.
void write_density_report(std::ostream& out, std::span<const DensityEstimate> per_atom,
                          int m, ReportFormat format);

/// Rows: atom, J, then the per-octave beta values.
void write_jones_report(std::ostream& out, std::span<const JonesEstimate> per_atom,
                        ReportFormat format);

/// Rows: atom, J, density min, density max, and the liminf-beta proxy when given.
void write_diagnostic_report(std::ostream& out, std::span<const RectifiabilityDiagnostic> rows,
                             const LiminfBetaReport* liminf, ReportFormat format);

/// {"config": ..., "properties": ..., "cubes": [{cube, level, label, massA, mass}, ...]}
void write_partition_report(std::ostream& out, const GoodBadPartition& partition,
                            const PartitionProperties& properties, ReportFormat format);

/// {"vertices": [[...], ...], "length": L}
void write_polyline_json(std::ostream& out, const Polyline& curve);
Polyline read_polyline_json(std::istream& in);

/// One entry per epsilon with its polyline, certificates and coverage, plus the uncovered mass.
void write_family_report(std::ostream& out, const FamilyReport& family);

/// 2-D rendering of atoms (area ~ weight) and curves; requires dimension 2.
void write_svg(std::ostream& out, const DiscreteMeasure& mu, std::span<const Polyline> curves);

}  // namespace rectiscope
