#pragma once

#include <stdexcept>
#include <string>

namespace slicevol {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ZeroDirection : public Error {
public:
    ZeroDirection() : Error("direction vector must be nonzero") {}
};

class DimensionTooSmall : public Error {
public:
    explicit DimensionTooSmall(const std::string& what) : Error(what) {}
};

class DimensionTooLarge : public Error {
public:
    explicit DimensionTooLarge(const std::string& what) : Error(what) {}
};

class DegenerateSimplex : public Error {
public:
    explicit DegenerateSimplex(const std::string& what) : Error(what) {}
};

class ZeroCoordinate : public Error {
public:
    explicit ZeroCoordinate(int index)
        : Error("cube direction has a zero coordinate at index " + std::to_string(index) +
                "; drop constant coordinates before calling (the volume does not depend on them)") {}
};

class InvalidInterval : public Error {
public:
    explicit InvalidInterval(const std::string& what) : Error(what) {}
};

class DerivativeUnavailable : public Error {
public:
    explicit DerivativeUnavailable(const std::string& what) : Error(what) {}
};

class TooCloseToBreakpoint : public Error {
public:
    explicit TooCloseToBreakpoint(const std::string& what) : Error(what) {}
};

class DegenerateBody : public Error {
public:
    explicit DegenerateBody(const std::string& what) : Error(what) {}
};

class InvalidRange : public Error {
public:
    explicit InvalidRange(const std::string& what) : Error(what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

} // namespace slicevol
