#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specem {

// Base type for everything this library throws on bad data, so callers can
// catch one class at the CLI boundary and map it to an exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroVarianceSeries : Error {
  using Error::Error;
};

struct EmptySpectrum : Error {
  using Error::Error;
};

struct MixedGrids : Error {
  using Error::Error;
};

struct ZeroTotalWeight : Error {
  using Error::Error;
};

struct EmptyCluster : Error {
  std::size_t cluster;
  explicit EmptyCluster(std::size_t k)
      : Error("cluster " + std::to_string(k) + " has no responsibility mass"), cluster(k) {}
};

struct DegenerateRun : Error {
  using Error::Error;
};

struct UndefinedNEC : Error {
  using Error::Error;
};

struct TooFewPoints : Error {
  using Error::Error;
};

struct RecordingTooShort : Error {
  using Error::Error;
};

struct InvalidSpec : Error {
  using Error::Error;
};

struct OverlapError : Error {
  using Error::Error;
};

struct DegenerateComponent : Error {
  using Error::Error;
};

// File ingestion errors. Row/column are 1-based and refer to the file as
// written, header line included.
struct ParseError : Error {
  std::size_t row;
  std::size_t col;
  ParseError(const std::string& what, std::size_t r, std::size_t c)
      : Error(what + " (row " + std::to_string(r) + ", col " + std::to_string(c) + ")"),
        row(r),
        col(c) {}
};

struct RaggedData : Error {
  using Error::Error;
};

struct EmptyFile : Error {
  using Error::Error;
};

struct AmbiguousColumns : Error {
  using Error::Error;
};

}  // namespace specem
