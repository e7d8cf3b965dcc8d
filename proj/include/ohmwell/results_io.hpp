#ifndef OHMWELL_RESULTS_IO_HPP
#define OHMWELL_RESULTS_IO_HPP

/// @file results_io.hpp
/// @brief Deterministic result output: CSV files with every number printed
///        as %.17g (lossless for doubles, so a rerun of the same config is
///        byte-identical) plus a manifest.json tying the files to the
///        config hash and the diagnostic summary.

#include "ohmwell/galerkin.hpp"
#include "ohmwell/steklov.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ohmwell {

/// Write energy.csv, coeffs.csv, one fields_NNN.csv per snapshot, and
/// manifest.json into `dir` (created if needed).  Returns the written file
/// names in manifest order.
std::vector<std::string> write_results(const SimulationResult& result,
                                       const std::filesystem::path& dir);

/// Read a uniformly sampled time series from CSV: header optional, first
/// column t (uniform from 0), remaining columns the components.  Throws
/// config_error on malformed input or a non-uniform grid.
TimeSeries read_time_series(const std::filesystem::path& file);

} // namespace ohmwell

#endif
