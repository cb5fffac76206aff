#pragma once

#include <stdexcept>
#include <string>

namespace curator {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invariant violations in value-type construction (label sets, configs, policies).
class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InvalidLabel : public Error {
public:
    explicit InvalidLabel(const std::string& label)
        : Error("unknown label: \"" + label + "\""), label_(label) {}
    const std::string& label() const { return label_; }

private:
    std::string label_;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

// Malformed line in a record file; line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

class IoError : public Error {
public:
    using Error::Error;
};

class EmptyBatch : public Error {
public:
    EmptyBatch() : Error("batch is empty") {}
};

class EmptyTrainingSet : public Error {
public:
    EmptyTrainingSet() : Error("training set is empty") {}
};

class DegenerateTrainingSet : public Error {
public:
    DegenerateTrainingSet() : Error("training set contains fewer than two distinct labels") {}
};

class EmptyEvalSet : public Error {
public:
    EmptyEvalSet() : Error("evaluation set is empty") {}
};

class InitializationFailed : public Error {
public:
    using Error::Error;
};

class ProviderError : public Error {
public:
    enum class Kind {
        transport,        // connection failure or timeout
        http_status,      // non-retryable or persistent HTTP status
        bad_response,     // 2xx but unusable payload
        script_exhausted, // mock script has no responses left
        config            // unusable provider configuration (e.g. missing API key)
    };

    ProviderError(Kind kind, int attempts, const std::string& what)
        : Error(what), kind_(kind), attempts_(attempts) {}

    Kind kind() const { return kind_; }
    int attempts() const { return attempts_; }

private:
    Kind kind_;
    int attempts_ = 0;
};

} // namespace curator
