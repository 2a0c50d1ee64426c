#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace posmod {

/// Raised for malformed input text. Carries a 1-based line/column position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A node of an s-expression: either an atom (bare token) or a list.
struct SExpr {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(std::string_view text) const { return is_atom() && atom == text; }

  /// True when this is a list whose first item is the atom `head`.
  bool has_head(std::string_view head) const;

  [[noreturn]] void fail(const std::string& message) const;
};

/// Reads every top-level expression from `text`. ';' starts a line comment.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Reads exactly one top-level expression.
SExpr read_sexpr(std::string_view text);

/// Parses an atom as a non-negative integer, failing with a positioned error.
int atom_to_int(const SExpr& expr);

}  // namespace posmod
