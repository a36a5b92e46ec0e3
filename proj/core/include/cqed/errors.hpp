// errors.hpp - Exception types raised by the cqed library

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cqed {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

// Requested excitation level outside {0, 1, 2}.
class UnsupportedLevel : public Error {
public:
    explicit UnsupportedLevel(int level)
        : Error("excitation level " + std::to_string(level) +
                " is not supported (two-photon transport needs levels 0..2)"),
          level_(level) {}
    int level() const noexcept { return level_; }

private:
    int level_;
};

// Transpose normalization failed: v^T v vanishes for an eigenvector, which
// happens at exceptional points of a complex symmetric matrix.
class DefectiveMatrix : public Error {
public:
    DefectiveMatrix(std::complex<double> eigenvalue, const std::string& detail);
    std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }

private:
    std::complex<double> eigenvalue_;
};

// g2 was requested at a frequency where the single-photon transmission
// vanishes to machine precision.
class TransmissionZero : public Error {
public:
    TransmissionZero(double omega_L, double transmission);
    double omega_L() const noexcept { return omega_L_; }
    double transmission() const noexcept { return transmission_; }

private:
    double omega_L_;
    double transmission_;
};

// Master-equation oracle observables did not settle under drive or Fock
// truncation refinement.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Dicke fast path disagrees with the full-space spectrum.
class FastPathMismatch : public Error {
public:
    using Error::Error;
};

// Configuration document is malformed or violates the schema.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace cqed
