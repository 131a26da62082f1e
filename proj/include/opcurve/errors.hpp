#pragma once

#include <stdexcept>
#include <string>

namespace opcurve {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An evaluation or data point lies outside the valid domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A size or count argument is inconsistent or too small.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// A linear system could not be solved to working precision.
class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& msg) : Error(msg) {}
};

/// The constraint matrix of an equality-constrained problem is row rank deficient.
class RankDeficientConstraints : public Error {
public:
    explicit RankDeficientConstraints(const std::string& msg) : Error(msg) {}
};

/// The KKT saddle system is numerically singular even after regularization.
class SingularKkt : public Error {
public:
    explicit SingularKkt(const std::string& msg) : Error(msg) {}
};

/// The GCV score is undefined (effective degrees of freedom exhaust the data).
class DegenerateGcv : public Error {
public:
    explicit DegenerateGcv(const std::string& msg) : Error(msg) {}
};

/// Every cell of a parameter search produced an undefined score.
class AllDegenerate : public Error {
public:
    explicit AllDegenerate(const std::string& msg) : Error(msg) {}
};

/// Offset radius of zero was requested.
class ZeroRadius : public Error {
public:
    explicit ZeroRadius(const std::string& msg) : Error(msg) {}
};

/// Offset curvature is evaluated at (or too close to) a cusp.
class CuspSingularity : public Error {
public:
    explicit CuspSingularity(const std::string& msg) : Error(msg) {}
};

/// A builtin test-dataset name is not recognized.
class UnknownTestFunction : public Error {
public:
    explicit UnknownTestFunction(const std::string& msg) : Error(msg) {}
};

/// File input could not be parsed.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A file could not be read or written; the message carries the path.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace opcurve
