#pragma once

#include <stdexcept>
#include <string>

namespace gbsm {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonStochasticRow : public Error {
public:
    int state, action;
    double sum;
    NonStochasticRow(int s, int a, double row_sum)
        : Error("transition row (s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                ") sums to " + std::to_string(row_sum)),
          state(s), action(a), sum(row_sum) {}
};

class RewardOutOfRange : public Error {
public:
    int state, action;
    RewardOutOfRange(int s, int a, double r, double r_max)
        : Error("reward (s=" + std::to_string(s) + ", a=" + std::to_string(a) + ") = " +
                std::to_string(r) + " outside [0, " + std::to_string(r_max) + "]"),
          state(s), action(a) {}
};

class InvalidGamma : public Error {
public:
    explicit InvalidGamma(double gamma)
        : Error("discount factor " + std::to_string(gamma) + " not in [0, 1)") {}
};

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class NotADistribution : public Error {
public:
    explicit NotADistribution(const std::string& what) : Error(what) {}
};

class TooLarge : public Error {
public:
    explicit TooLarge(const std::string& what) : Error(what) {}
};

class GammaMismatch : public Error {
public:
    GammaMismatch(double g1, double g2)
        : Error("discount factors differ: " + std::to_string(g1) + " vs " + std::to_string(g2)) {}
};

class ActionSpaceMismatch : public Error {
public:
    ActionSpaceMismatch(int a1, int a2)
        : Error("action spaces differ: " + std::to_string(a1) + " vs " + std::to_string(a2)) {}
};

class EmptySet : public Error {
public:
    explicit EmptySet(const std::string& what) : Error(what) {}
};

class InvalidAggregation : public Error {
public:
    explicit InvalidAggregation(const std::string& what) : Error(what) {}
};

class DegenerateRow : public Error {
public:
    int state, action;
    DegenerateRow(int s, int a)
        : Error("perturbed row (s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                ") clamped to all zeros"),
          state(s), action(a) {}
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error(what) {}
};

class EmptyRepresentativeSet : public Error {
public:
    EmptyRepresentativeSet() : Error("no state meets the sample threshold for every action") {}
};

class UncoveredStateAction : public Error {
public:
    int state, action;
    UncoveredStateAction(int s, int a)
        : Error("no samples left for representative pair (s=" + std::to_string(s) +
                ", a=" + std::to_string(a) + ") after filtering"),
          state(s), action(a) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace gbsm
