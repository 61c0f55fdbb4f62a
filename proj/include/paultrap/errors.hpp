#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace paultrap {

/// Bad input: non-positive parameters, mismatched records, malformed config.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation outside the window a trajectory was integrated on.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Integration produced non-finite values (unstable operating point over a long window).
class NumericRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zeros of the reference trajectory inside the window; f = -m xdot/x is singular there.
class SingularWindow : public std::runtime_error {
public:
    explicit SingularWindow(std::vector<double> zeros);

    const std::vector<double>& zeros() const noexcept { return zeros_; }

private:
    std::vector<double> zeros_;
};

/// Lattice Gaussian integral whose quadratic form is (numerically) singular.
class DegenerateIntegral : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two evaluation routes that must agree did not.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace paultrap
