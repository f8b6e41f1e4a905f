#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hretan {

/// Broad classification of failures, used by the CLI to pick an exit code.
enum class ErrorCategory {
    Input,     ///< malformed or inconsistent input files
    Config,    ///< bad flags or parameter combinations
    Contract,  ///< violated precondition or internal invariant
};

class Error : public std::runtime_error {
public:
    Error(std::string kind, ErrorCategory category, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)), category_(category) {}

    const std::string& kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string kind_;
    ErrorCategory category_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("parse_error", ErrorCategory::Input,
                "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class CycleError : public Error {
public:
    explicit CycleError(std::string member)
        : Error("cycle_error", ErrorCategory::Input,
                "hierarchy contains a cycle through '" + member + "'"),
          member_(std::move(member)) {}

    const std::string& member() const noexcept { return member_; }

private:
    std::string member_;
};

class LookupError : public Error {
public:
    explicit LookupError(const std::string& name)
        : Error("lookup_error", ErrorCategory::Input, "unknown feature '" + name + "'") {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& message)
        : Error("schema_error", ErrorCategory::Input, message) {}
};

/// Dataset ingestion failures. `row` is the 1-based line number (header = 1).
class LoadError : public Error {
public:
    enum class Code { Header, ColumnCount, NonBinaryValue, EmptyLabel, LabelCount, EmptyDataset };

    LoadError(Code code, std::size_t row, const std::string& message)
        : Error(kind_name(code), ErrorCategory::Input,
                row ? "row " + std::to_string(row) + ": " + message : message),
          code_(code), row_(row) {}

    Code code() const noexcept { return code_; }
    std::size_t row() const noexcept { return row_; }

private:
    static std::string kind_name(Code code) {
        switch (code) {
        case Code::Header: return "header_error";
        case Code::ColumnCount: return "column_count_error";
        case Code::NonBinaryValue: return "non_binary_value_error";
        case Code::EmptyLabel: return "empty_label_error";
        case Code::LabelCount: return "label_count_error";
        case Code::EmptyDataset: return "empty_dataset_error";
        }
        return "load_error";
    }

    Code code_;
    std::size_t row_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message)
        : Error("config_error", ErrorCategory::Config, message) {}
};

class ContractError : public Error {
public:
    explicit ContractError(const std::string& message)
        : Error("contract_error", ErrorCategory::Contract, message) {}
};

/// Raised when a statistic or metric has too little data to be defined.
class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& message)
        : Error("insufficient_data", ErrorCategory::Input, message) {}
};

class UndefinedMetricError : public Error {
public:
    explicit UndefinedMetricError(const std::string& message)
        : Error("undefined_metric", ErrorCategory::Input, message) {}
};

} // namespace hretan
