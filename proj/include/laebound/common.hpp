#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace laeb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Bad caller input: shapes, ranges, malformed configuration.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionError : ArgumentError {
    using ArgumentError::ArgumentError;
};

// Numeric failures detected while computing.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPsdError : NumericalError {
    double eigenvalue;
    NotPsdError(const std::string& msg, double eig)
        : NumericalError(msg), eigenvalue(eig) {}
};

struct SingularMatrixError : NumericalError {
    double eigenvalue;
    SingularMatrixError(const std::string& msg, double eig)
        : NumericalError(msg), eigenvalue(eig) {}
};

// lambda outside the MGF domain; carries the feasibility threshold 1/(2*eta_1).
struct MgfDomainError : NumericalError {
    double threshold;
    MgfDomainError(const std::string& msg, double thr)
        : NumericalError(msg), threshold(thr) {}
};

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    long long line;
    ParseError(const std::string& msg, long long line_no)
        : std::runtime_error(msg), line(line_no) {}
};

struct EmptyDatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace laeb
