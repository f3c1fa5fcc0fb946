#pragma once

#include <stdexcept>
#include <string>

namespace refclass {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interval endpoints outside [0,1] or lo > hi.
class InvalidInterval : public Error {
public:
    using Error::Error;
};

/// Malformed class term, e.g. a bracket with overlapping constituents.
class InvalidTerm : public Error {
public:
    using Error::Error;
};

/// The agreement combination hit a certainty conflict (a factor at 1 and another at 0).
class UndefinedCombination : public Error {
public:
    using Error::Error;
};

/// A size cap was exceeded (memberships per individual, names in a bound system).
class ScaleError : public Error {
public:
    using Error::Error;
};

/// The knowledge base admits no frequency model, or carries conflicting statistics.
class InconsistentKb : public Error {
public:
    using Error::Error;
};

class UnknownIndividual : public Error {
public:
    using Error::Error;
};

class UnresolvableQuery : public Error {
public:
    using Error::Error;
};

} // namespace refclass
