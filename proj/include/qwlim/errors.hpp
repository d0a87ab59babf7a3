#ifndef QWLIM_ERRORS_HPP
#define QWLIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qwlim {

/// A standing hypothesis of the model is violated (zero potential,
/// tube condition, exponent bound, ...). The message names the hypothesis.
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve or root search failed (singular system, no bracket, ...).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// A run demanded a resonant configuration and the input is not resonant.
class NotResonantError : public std::runtime_error {
public:
    explicit NotResonantError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qwlim

#endif
