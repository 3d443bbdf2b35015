#pragma once

#include <stdexcept>
#include <string>

#include "ecnf2mip/theory.hpp"

namespace ecnf2mip {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line, int col, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + " col " + std::to_string(col) +
                             ": " + message),
          line(line),
          col(col) {}
};

// Line-oriented concrete syntax:
//   theory NAME
//   int ID [LO,UP]
//   atom ID+
//   clause LIT ("|" LIT)*
//   equiv ATOM "<=>" LIT (("&"|"|") LIT)*      -- one connective per line
//   sum LIT "<=>" TERMS CMP INT
//   csum LIT "<=>" ("[" LIT "]" TERM)+ CMP INT
//   define "{" (ATOM "<-" LIT (("&"|"|") LIT)* ".")* "}"
//   minimize TERMS
// LIT is ID or -ID; TERM is INT ID or ID (a leading "-" negates the
// coefficient); TERMS chains terms with "+" or "-"; CMP is one of
// < <= = >= > !=; "#" starts a comment.
//
// Identifiers referenced before declaration parse fine but are reported by
// validate_theory as dangling references. Semantic checks in general are
// left to validate_theory; only syntax errors throw.
Theory parse_ecnf_text(const std::string& text);

// Canonical form: theory line, int and atom declarations, constraints in
// order, definitions, minimize last. parse(print(t)) is structurally equal
// to t for every valid theory. Throws std::invalid_argument on constructs
// the grammar cannot express (empty clauses, empty rule bodies, a nonzero
// objective constant).
std::string print_ecnf_text(const Theory& t);

}  // namespace ecnf2mip
