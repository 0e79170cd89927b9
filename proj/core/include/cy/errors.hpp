#pragma once

#include <stdexcept>
#include <string>

namespace cy {

// Precondition and input failures are exceptions; solver outcomes
// (divergence, step underflow) are reported in result structs instead.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& m) : Error("dimension mismatch: " + m) {}
};
struct NotAlmostComplex : Error {
  explicit NotAlmostComplex(const std::string& m) : Error("J^2 != -I: " + m) {}
};
struct NotCompatible : Error {
  explicit NotCompatible(const std::string& m) : Error("not omega-compatible: " + m) {}
};
struct NotSPD : Error {
  explicit NotSPD(const std::string& m) : Error("matrix not symmetric positive definite: " + m) {}
};
struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& m) : Error("not positive definite: " + m) {}
};
struct ParameterOutOfRange : Error {
  explicit ParameterOutOfRange(const std::string& m) : Error("parameter out of range: " + m) {}
};
struct DegreeOverflow : Error {
  explicit DegreeOverflow(const std::string& m) : Error("form degree overflow: " + m) {}
};
struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& m) : Error("index out of range: " + m) {}
};
struct NotElliptic : Error {
  explicit NotElliptic(const std::string& m) : Error("taming violated, operator not elliptic: " + m) {}
};
struct RhsNotMeanZero : Error {
  explicit RhsNotMeanZero(const std::string& m) : Error("right-hand side not mean-zero: " + m) {}
};
struct NotASolution : Error {
  explicit NotASolution(const std::string& m) : Error("state does not satisfy the equation: " + m) {}
};
struct NotExact : Error {
  explicit NotExact(const std::string& m) : Error("form not exact: " + m) {}
};
struct CoverGap : Error {
  explicit CoverGap(const std::string& m) : Error("charts fail to cover the torus: " + m) {}
};
struct SliceRequired : Error {
  explicit SliceRequired(const std::string& m) : Error("2D slice required: " + m) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("config error: " + m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error("i/o error: " + m) {}
};

}  // namespace cy
