#pragma once

#include <stdexcept>
#include <string>

namespace dendro {

class DendroError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two values live on different host trees.
class HostMismatchError : public DendroError {
public:
    HostMismatchError() : DendroError("points belong to incompatible trees") {}
};

class InvalidArgumentError : public DendroError {
public:
    using DendroError::DendroError;
};

class ParseError : public DendroError {
public:
    using DendroError::DendroError;
};

// Raised when an operation needs the map to be monotone and it is not.
class NotMonotoneError : public DendroError {
public:
    using DendroError::DendroError;
};

// Cell or enumeration budget exhausted.
class ResourceError : public DendroError {
public:
    using DendroError::DendroError;
};

}  // namespace dendro
