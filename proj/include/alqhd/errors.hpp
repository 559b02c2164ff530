#pragma once

#include <stdexcept>
#include <string>

namespace alqhd {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Wavefunction (or density) has zero total mass; normalization impossible.
class ZeroNormError : public Error {
 public:
  using Error::Error;
};

/// Axis argument does not name an axis of the grid.
class AxisOutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Point/vector dimension disagrees with the object it is used with.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Objective returned NaN or +-inf at a point where a finite value is required.
class NonFiniteObjectiveError : public Error {
 public:
  using Error::Error;
};

/// Norm of the evolving state drifted past the hard safety limit.
class NormDriftError : public Error {
 public:
  using Error::Error;
};

/// Zoom produced a box whose width collapsed below the representable minimum.
class DegenerateBoxError : public Error {
 public:
  using Error::Error;
};

/// Encoder was asked about a variable with no grid values attached.
class MissingGridError : public Error {
 public:
  using Error::Error;
};

/// Expression term touches more variables than the configured width cap.
class TermTooWideError : public Error {
 public:
  using Error::Error;
};

/// One-hot assignment (or qubit index) outside the layout's range.
class IndexOutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Case-file text could not be parsed; message carries line number and context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened for reading or writing.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Case file declares a format version other than the supported one.
class UnsupportedVersionError : public Error {
 public:
  using Error::Error;
};

/// BFS subgraph extraction exhausted a connected component early.
class DisconnectedError : public Error {
 public:
  using Error::Error;
};

/// Branch with r = x = 0 cannot enter the admittance matrix.
class ZeroImpedanceBranchError : public Error {
 public:
  using Error::Error;
};

/// Power-law fit input carries no usable spread in the abscissa.
class DegenerateSeriesError : public Error {
 public:
  using Error::Error;
};

/// Constrained solve never reached the feasibility tolerance.
class NoFeasiblePointError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside its documented domain (e.g. nonpositive weight).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace alqhd
