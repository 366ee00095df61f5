#pragma once

#include <stdexcept>
#include <string>

namespace scribkit {

// Base of every error thrown by the library. The CLI maps subclasses to exit
// codes: parameter -> 2, format/shape/io -> 3, numeric -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace scribkit
