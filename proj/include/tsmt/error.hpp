#ifndef TSMT_ERROR_HPP
#define TSMT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tsmt {

/// Argument outside the mathematical domain of a function (p outside (0,1), negative x for g, ...).
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// Invalid configuration or parameter (bad df, gamma outside (0,1], subsample too small, ...).
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input data (unparseable CSV cell, ragged rows, missing file).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tsmt

#endif  // TSMT_ERROR_HPP
