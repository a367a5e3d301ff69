#pragma once

#include <string>
#include <vector>

#include "specem/errors.hpp"
#include "specem/model_selection.hpp"
#include "specem/spike.hpp"
#include "specem/types.hpp"

namespace specem {

// Render a double with 17 significant digits (lossless for IEEE doubles).
std::string format_double(double v);

// Columns are series, rows are time steps. A leading column whose header is
// "t" or "time" (any case) is treated as a time axis and skipped. Throws
// ParseError (1-based row/col), RaggedData, EmptyFile.
TimeSeriesSet read_series_csv(const std::string& path);

void write_series_csv(const std::string& path, const TimeSeriesSet& set);

// Single column of samples, comma- or whitespace-separated, optional header.
// With several columns the one named "y" is taken; otherwise
// AmbiguousColumns.
Recording read_recording(const std::string& path);

void write_recording_csv(const std::string& path, const Recording& rec);

// Long-format periodogram table: series,bin,omega,power.
void write_spectra_csv(const std::string& path, const std::vector<std::string>& names,
                       const std::vector<Spectrum>& spectra);

struct NamedSpectra {
  std::vector<std::string> names;
  std::vector<Spectrum> spectra;
};

NamedSpectra read_spectra_csv(const std::string& path);

// onset,slowness per detected spike.
void write_onsets_csv(const std::string& path, const SpikeCatalog& catalog);

// Plot-ready K,loglik,nec rows (blank cells where undefined).
void write_selection_csv(const std::string& path, const SelectionReport& report);

}  // namespace specem
