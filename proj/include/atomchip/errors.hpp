#pragma once

#include <stdexcept>
#include <string>

namespace atomchip {

/// Field evaluation requested on (or inside) a conductor.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what, int elementIndex = -1)
        : std::runtime_error(what), element_index(elementIndex) {}
    int element_index;
};

class InsideConductorError : public SingularityError {
public:
    using SingularityError::SingularityError;
};

/// |B| below the zero threshold: the gradient of the modulus is undefined.
class AtFieldZeroError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SaddlePointError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class PresetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace atomchip
