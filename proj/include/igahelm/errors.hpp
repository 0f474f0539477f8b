#pragma once

#include <stdexcept>
#include <string>

namespace igahelm {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter outside its admissible range (e.g. t outside [0,1]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Knot insertion that would violate the multiplicity cap.
class RefinementError : public Error {
public:
    using Error::Error;
};

/// Object construction or input that breaks a type invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Degenerate Jacobian at a parametric location.
class GeometryError : public Error {
public:
    GeometryError(const std::string& what, double xi, double eta)
        : Error(what + " at (xi, eta) = (" + std::to_string(xi) + ", " + std::to_string(eta) + ")"),
          xi_(xi), eta_(eta) {}

    double xi() const noexcept { return xi_; }
    double eta() const noexcept { return eta_; }

private:
    double xi_;
    double eta_;
};

/// Malformed text input; carries the offending line number (1-based, 0 if unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Linear solver breakdown; carries the residual that was achieved.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (relative residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Requested output needs data the problem does not provide (e.g. no exact solution).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

} // namespace igahelm
