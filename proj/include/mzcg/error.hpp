#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mzcg {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class UnsupportedModel : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Raised when an integrated state leaves the finite range. `step` is the
// integrator step at which the bad state was produced; `sample` is the
// ensemble or Monte Carlo index when the failure happened inside a batch.
class NumericalBlowup : public Error {
public:
    NumericalBlowup(std::size_t step, std::size_t sample, const std::string& what)
        : Error(what), step_(step), sample_(sample) {}

    std::size_t step() const noexcept { return step_; }
    std::size_t sample() const noexcept { return sample_; }

private:
    std::size_t step_;
    std::size_t sample_;
};

}  // namespace mzcg
