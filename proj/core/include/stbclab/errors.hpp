#ifndef STBCLAB_ERRORS_HPP
#define STBCLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stbclab {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A matrix required to have full column rank failed the rank-tolerance test.
class RankDeficient : public Error {
public:
    using Error::Error;
};

// Hermitian matrix handed to the inverse square root is not positive definite.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

// Constellation order outside the built-in square-QAM set.
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

// Operation needs dispersion matrices but the code only carries a direct
// equivalent-channel generator.
class DirectOnlyCode : public Error {
public:
    using Error::Error;
};

// A dispersion code mixes plain and conjugated symbols within one time slot.
class InvalidColumnType : public Error {
public:
    using Error::Error;
};

// Exhaustive search space exceeds the configured bit budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// A group's projected channel matrix vanished: nothing left to decode.
class GroupUndecodable : public Error {
public:
    GroupUndecodable(const std::string& msg, int group)
        : Error(msg), group_index(group) {}
    int group_index;
};

// Estimator preconditions (grid size, error counts) not met.
class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace stbclab

#endif
