#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sf {

// Base class for every error the engine raises on purpose.
class engine_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A function was evaluated outside its domain (log of a non-positive value,
// division by zero, non-finite intermediate). Signals an invalid chart point.
class domain_error : public engine_error {
public:
    using engine_error::engine_error;
};

// A derivative of higher order than the jet carries was requested.
class order_error : public engine_error {
public:
    using engine_error::engine_error;
};

class syntax_error : public engine_error {
public:
    syntax_error(const std::string& message, std::size_t offset)
        : engine_error(message + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class unknown_identifier : public engine_error {
public:
    unknown_identifier(const std::string& token, std::size_t offset)
        : engine_error("unknown identifier '" + token + "' (offset " +
                       std::to_string(offset) + ")"),
          token_(token), offset_(offset) {}
    const std::string& token() const { return token_; }
    std::size_t offset() const { return offset_; }

private:
    std::string token_;
    std::size_t offset_;
};

class singular_metric : public engine_error {
public:
    using engine_error::engine_error;
};

class not_positive_definite : public engine_error {
public:
    using engine_error::engine_error;
};

class dimension_error : public engine_error {
public:
    using engine_error::engine_error;
};

class missing_lambda : public engine_error {
public:
    using engine_error::engine_error;
};

class zero_vector_field : public engine_error {
public:
    using engine_error::engine_error;
};

class not_torse_forming : public engine_error {
public:
    using engine_error::engine_error;
};

class not_concircular : public engine_error {
public:
    using engine_error::engine_error;
};

class io_error : public engine_error {
public:
    using engine_error::engine_error;
};

class schema_error : public engine_error {
public:
    schema_error(const std::string& message, const std::string& pointer)
        : engine_error(message + " (at " + pointer + ")"), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace sf
