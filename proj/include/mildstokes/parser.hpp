#pragma once

#include <map>
#include <optional>
#include <string>

#include "mildstokes/diffmod.hpp"

namespace mildstokes {

/// Syntax error with a 1-based position into the original source.
struct ParseError : Error {
    ParseError(int line_, int col_, std::string expected_, std::string found_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) +
                ": expected " + expected_ + ", found '" + found_ + "'"),
          line(line_), col(col_), expected(std::move(expected_)), found(std::move(found_)) {}
    int line;
    int col;
    std::string expected;
    std::string found;
};

/// Parsed .dsys file: header, matrix, optional formal datum and parameters.
struct SystemFile {
    char var = 't';
    int rank = 0;
    int ram = 1;
    DiffSystem system;
    std::optional<FormalDatum> formal;
    std::map<std::string, double> params;
};

/// Grammar: `rank N`, `var t|s`, `ram N`, `A = [[entry,...],...]`,
/// `formal = [(exponent, [[...]]), ...]`, `param name value`, `#` comments.
/// Entries are rational expressions in t (or s = t^(-1)) with complex
/// literals `a+bi`; `u` is reserved and rejected.  Entries are expanded at
/// t = 0 to the order `order`.
SystemFile parse_system(const std::string& text, int order = kDefaultOrder);

std::string print_system(const SystemFile& sf);

/// `c_m*s + c_{m-1}*s^((m-1)/m) + ...`; minimal ramification is inferred.
Exponent parse_exponent(const std::string& text);
/// `[(exponent, [[matrix]]), ...]`
FormalDatum parse_formal(const std::string& text, int ram_hint = 0);

std::string print_exponent(const Exponent& a);
std::string print_formal(const FormalDatum& fd);

bool structurally_equal(const SystemFile& a, const SystemFile& b, double tol = 1e-9);

}  // namespace mildstokes
