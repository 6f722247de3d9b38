#pragma once

#include <filesystem>
#include <span>
#include <ostream>
#include <string>

#include "vixb/bounds.hpp"
#include "vixb/experiment.hpp"

namespace vixb {

/// Fixed: 4 decimals. Raw: %.17g.
enum class NumberFormat { Fixed, Raw };

// Comma-separated, header first, "NA" for a missing entry. CI columns hold
// the 95% half-width.
//
// Derivative table columns:
//   instrument,strike,lower,lower_ci,upper,upper_ci,plain,plain_ci,oracle,oracle_ci
// Rows: future; jensen (vol swap in the lower columns, sqrt of the variance
// swap in the upper columns); then call, put, cap, swap for each strike.
void write_table(std::ostream& os, const DerivativeTable& t, NumberFormat f);

// Sweep: <param>,plain,plain_ci,lower,lower_ci,upper,upper_ci
void write_sweep(std::ostream& os, const std::string& param, const std::vector<SweepRow>& rows,
                 NumberFormat f);

// Convergence, one row per path count: n_paths, then lower/upper/plain with
// CIs for degrees (3, 2) (prefix low_) and (4, 3) (prefix high_), then the
// oracle reference repeated on every row (NA if disabled).
void write_convergence(std::ostream& os, const ConvergenceResult& r, NumberFormat f);

/// Truncates and writes; throws Error on failure.
void write_text_file(const std::filesystem::path& file, const std::string& text);

}  // namespace vixb

namespace vixb {

// Oracle-only table: instrument,strike,value,ci with the same row order as
// write_table (no jensen row).
void write_oracle_column(std::ostream& os, std::span<const double> strikes, const TableColumn& c,
                         NumberFormat f);

}  // namespace vixb
