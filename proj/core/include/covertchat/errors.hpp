#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covertchat {

/// Base class for all covertchat errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A symbol of a digit string is not part of the alphabet's digit set.
class InvalidDigitError : public Error {
public:
    InvalidDigitError(std::string msg, std::size_t position)
        : Error(std::move(msg)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A character of a story is not part of the embeddable character set.
class NotEmbeddableError : public Error {
public:
    NotEmbeddableError(std::string msg, std::size_t position)
        : Error(std::move(msg)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// The (C, b) inputs handed to the embedder violate its preconditions.
class InvalidScheduleError : public Error {
public:
    using Error::Error;
};

/// The embedder exhausted its restart budget without placing a character.
class EmbeddingStuckError : public Error {
public:
    EmbeddingStuckError(std::string msg, std::size_t char_index, std::size_t restarts)
        : Error(std::move(msg)), char_index_(char_index), restarts_(restarts) {}
    std::size_t char_index() const noexcept { return char_index_; }
    std::size_t restarts() const noexcept { return restarts_; }

private:
    std::size_t char_index_;
    std::size_t restarts_;
};

/// A remote token model could not be reached or answered with an error.
class ModelUnavailableError : public Error {
public:
    using Error::Error;
};

/// The remote endpoint answered but does not expose top log-probabilities.
class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

/// An x-coordinate does not correspond to a point on the curve.
class InvalidPointError : public Error {
public:
    using Error::Error;
};

/// A key-exchange run failed; carries the round in which it happened.
class ProtocolFailureError : public Error {
public:
    ProtocolFailureError(std::string msg, int round)
        : Error(std::move(msg)), round_(round) {}
    int round() const noexcept { return round_; }

private:
    int round_ = -1;
};

} // namespace covertchat
