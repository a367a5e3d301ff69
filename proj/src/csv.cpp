#include "specem/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace specem {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool is_time_header(const std::string& name) {
  const std::string l = lower(name);
  return l == "t" || l == "time";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

TimeSeriesSet read_series_csv(const std::string& path) {
  const auto lines = read_lines(path);

  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw EmptyFile("no content in " + path);

  const auto header = split_csv_line(lines[header_line]);
  const bool has_time_col = !header.empty() && is_time_header(header.front());
  const std::size_t first_series_col = has_time_col ? 1 : 0;
  if (header.size() <= first_series_col) {
    throw EmptyFile("no series columns in " + path);
  }

  TimeSeriesSet set;
  for (std::size_t c = first_series_col; c < header.size(); ++c) {
    set.labels.push_back(header[c].empty() ? "series_" + std::to_string(c + 1) : header[c]);
  }
  set.series.resize(set.labels.size());

  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto cells = split_csv_line(lines[li]);
    if (cells.size() != header.size()) {
      throw RaggedData("row " + std::to_string(li + 1) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(header.size()));
    }
    for (std::size_t c = first_series_col; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_number(cells[c], v)) {
        throw ParseError("not a number: '" + cells[c] + "'", li + 1, c + 1);
      }
      set.series[c - first_series_col].values.push_back(v);
    }
  }
  if (set.series.front().values.empty()) throw EmptyFile("no data rows in " + path);
  return set;
}

void write_series_csv(const std::string& path, const TimeSeriesSet& set) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out << ',';
    out << (i < set.labels.size() ? set.labels[i] : "series_" + std::to_string(i + 1));
  }
  out << '\n';
  const std::size_t t_len = set.length();
  for (std::size_t t = 0; t < t_len; ++t) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i) out << ',';
      out << format_double(set.series[i].values[t]);
    }
    out << '\n';
  }
}

Recording read_recording(const std::string& path) {
  const auto lines = read_lines(path);

  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw EmptyFile("no content in " + path);

  // Whitespace-separated numeric streams have no header and no commas.
  const bool has_comma = lines[first].find(',') != std::string::npos;
  auto tokenize = [&](const std::string& line) {
    if (has_comma) return split_csv_line(line);
    std::vector<std::string> toks;
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) toks.push_back(tok);
    return toks;
  };

  const auto head = tokenize(lines[first]);
  double probe = 0.0;
  const bool headerless = parse_number(head.front(), probe);

  std::size_t column = 0;
  std::size_t ncols = head.size();
  std::size_t data_start = first;
  if (!headerless) {
    data_start = first + 1;
    if (ncols > 1) {
      bool found = false;
      for (std::size_t c = 0; c < head.size(); ++c) {
        if (lower(head[c]) == "y") {
          column = c;
          found = true;
          break;
        }
      }
      if (!found) {
        throw AmbiguousColumns(path + " has " + std::to_string(ncols) +
                               " columns and none is named 'y'");
      }
    }
  } else if (ncols > 1 && has_comma) {
    throw AmbiguousColumns(path + " has several columns and no header naming 'y'");
  }

  Recording rec;
  for (std::size_t li = data_start; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto cells = tokenize(lines[li]);
    if (has_comma || !headerless) {
      if (cells.size() != ncols) {
        throw RaggedData("row " + std::to_string(li + 1) + " has " + std::to_string(cells.size()) +
                         " cells, expected " + std::to_string(ncols));
      }
      double v = 0.0;
      if (!parse_number(cells[column], v)) {
        throw ParseError("not a number: '" + cells[column] + "'", li + 1, column + 1);
      }
      rec.samples.push_back(v);
    } else {
      // Free-form whitespace floats: take every token.
      for (std::size_t c = 0; c < cells.size(); ++c) {
        double v = 0.0;
        if (!parse_number(cells[c], v)) {
          throw ParseError("not a number: '" + cells[c] + "'", li + 1, c + 1);
        }
        rec.samples.push_back(v);
      }
    }
  }
  if (rec.samples.empty()) throw EmptyFile("no samples in " + path);
  return rec;
}

void write_recording_csv(const std::string& path, const Recording& rec) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << "y\n";
  for (double v : rec.samples) out << format_double(v) << '\n';
}

void write_spectra_csv(const std::string& path, const std::vector<std::string>& names,
                       const std::vector<Spectrum>& spectra) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << "series,bin,omega,power\n";
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const std::string name = i < names.size() ? names[i] : "series_" + std::to_string(i + 1);
    const auto& s = spectra[i];
    for (std::size_t j = 0; j < s.bins(); ++j) {
      out << name << ',' << (j + 1) << ',' << format_double(s.frequency(j)) << ','
          << format_double(s.power[j]) << '\n';
    }
  }
}

NamedSpectra read_spectra_csv(const std::string& path) {
  const auto lines = read_lines(path);
  std::size_t li = 0;
  while (li < lines.size() && trim(lines[li]).empty()) ++li;
  if (li == lines.size()) throw EmptyFile("no content in " + path);
  const auto header = split_csv_line(lines[li]);
  if (header.size() != 4) throw RaggedData(path + ": expected series,bin,omega,power");

  NamedSpectra out;
  for (++li; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto cells = split_csv_line(lines[li]);
    if (cells.size() != 4) {
      throw RaggedData("row " + std::to_string(li + 1) + " has " + std::to_string(cells.size()) +
                       " cells, expected 4");
    }
    double bin = 0.0, omega = 0.0, power = 0.0;
    if (!parse_number(cells[1], bin)) {
      throw ParseError("not a number: '" + cells[1] + "'", li + 1, 2);
    }
    if (!parse_number(cells[2], omega)) {
      throw ParseError("not a number: '" + cells[2] + "'", li + 1, 3);
    }
    if (!parse_number(cells[3], power)) {
      throw ParseError("not a number: '" + cells[3] + "'", li + 1, 4);
    }
    if (out.names.empty() || out.names.back() != cells[0]) {
      out.names.push_back(cells[0]);
      out.spectra.push_back(Spectrum{{}, 0, SpectrumKind::raw});
    }
    Spectrum& s = out.spectra.back();
    s.power.push_back(power);
    // omega = bin / T recovers the grid length
    if (omega > 0.0) s.time_len = static_cast<std::size_t>(std::lround(bin / omega));
  }
  if (out.spectra.empty()) throw EmptyFile("no data rows in " + path);
  return out;
}

void write_onsets_csv(const std::string& path, const SpikeCatalog& catalog) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << "onset,slowness\n";
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    out << catalog.onsets[i] << ',' << format_double(catalog.slowness[i]) << '\n';
  }
}

void write_selection_csv(const std::string& path, const SelectionReport& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << "K,loglik,nec\n";
  for (const auto& rec : report.records) {
    out << rec.k << ',';
    if (rec.loglik) out << format_double(*rec.loglik);
    out << ',';
    if (rec.nec) out << format_double(*rec.nec);
    out << '\n';
  }
}

}  // namespace specem
