// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lagforge {

/// Base class for all errors raised by the engine.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Lexical or grammatical error in an input file. Carries a 1-based position.
class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string& msg)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
                ": " + msg),
          line(line), column(column) {}
    int line;
    int column;
};

/// A clause violates the range-restriction (safety) condition. Also raised for
/// facts containing variables, which are unsafe clauses with an empty body.
class UnsafeRuleError : public Error {
public:
    UnsafeRuleError(std::string rule, int line, std::string variable, const std::string& msg)
        : Error(msg), rule_id(std::move(rule)), line(line), variable(std::move(variable)) {}
    std::string rule_id;
    int line;
    std::string variable;
};

class WildcardInHeadError : public Error {
public:
    WildcardInHeadError(int line, const std::string& msg) : Error(msg), line(line) {}
    int line;
};

class WildcardInFactError : public Error {
public:
    WildcardInFactError(int line, const std::string& msg) : Error(msg), line(line) {}
    int line;
};

/// The program's negative dependencies form a cycle. The message names the cycle.
class UnstratifiableError : public Error {
public:
    UnstratifiableError(std::string cycle, const std::string& msg)
        : Error(msg), cycle(std::move(cycle)) {}
    std::string cycle;
};

/// The configured semi-naive round cap was exceeded.
class IterationLimitError : public Error {
public:
    using Error::Error;
};

/// A scenario generator parameter set is inconsistent.
class InvalidSpecError : public Error {
public:
    using Error::Error;
};

} // namespace lagforge
