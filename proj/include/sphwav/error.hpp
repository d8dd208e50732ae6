#ifndef SPHWAV_ERROR_HPP
#define SPHWAV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sphwav
{

/// Argument outside the mathematical domain of a function (|t| > 1, l < 0, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Harmonic index with |k| > l, or a table lookup outside its band limit.
class IndexError : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

/// Invalid configuration of a grid, scale sequence or run.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed file or header. `field()` names the offending entry.
class FormatError : public std::runtime_error
{
public:
    FormatError(std::string field, const std::string& what)
        : std::runtime_error(what), field_(std::move(field))
    {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Numerical failure: quadrature that does not settle, solver that does not converge,
/// grids too coarse for the requested band limit.
class NumericalError : public std::runtime_error
{
public:
    explicit NumericalError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual)
    {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace sphwav

#endif
