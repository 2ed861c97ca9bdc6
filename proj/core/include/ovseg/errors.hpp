#pragma once

#include <stdexcept>
#include <string>

namespace ovseg {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DegeneratePolygon : public Error {
public:
    explicit DegeneratePolygon(const std::string& msg) : Error(msg) {}
};

class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& msg) : Error(msg) {}
};

class NoSeparation : public Error {
public:
    explicit NoSeparation(const std::string& msg) : Error(msg) {}
};

class ZeroLengthLine : public Error {
public:
    explicit ZeroLengthLine(const std::string& msg) : Error(msg) {}
};

class DegenerateSegment : public Error {
public:
    explicit DegenerateSegment(const std::string& msg) : Error(msg) {}
};

class FitFailure : public Error {
public:
    explicit FitFailure(const std::string& msg) : Error(msg) {}
};

class EmptyVoteMap : public Error {
public:
    explicit EmptyVoteMap(const std::string& msg) : Error(msg) {}
};

class TooManySegments : public Error {
public:
    explicit TooManySegments(const std::string& msg) : Error(msg) {}
};

class DegenerateEvidence : public Error {
public:
    explicit DegenerateEvidence(const std::string& msg) : Error(msg) {}
};

class SingularGram : public Error {
public:
    explicit SingularGram(const std::string& msg) : Error(msg) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class PlacementExhausted : public Error {
public:
    explicit PlacementExhausted(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace ovseg
