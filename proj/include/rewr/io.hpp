// Plain-text exchange format for rewrite systems.
//
//   ars <n_nodes>          header, first significant line
//   labels <k>             optional: label count when it cannot be inferred
//   comm                   optional: force the two-relation flavor
//   -> <src> <dst> [lbl]   forward step
//   ~> <src> <dst> [lbl]   second-relation step
//   # ...                  comment, ignored; blank lines ignored
//
// Node ids are 0-based decimals. Labels appear on all edges or none. Any ~>
// line (or the comm directive) makes the system a relation pair. Output is
// UTF-8 with \n line endings, edges sorted by (src, dst, label), -> before
// ~>; printing then parsing reproduces the value exactly.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

#include "rewr/core.hpp"
#include "rewr/decreasing.hpp"

namespace rewr {

using ParsedSystem = std::variant<Ars, CommArs, LabelledArs, LabelledCommArs>;

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& message);
    /// 1-based line number of the offending line.
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Reads one system; throws ParseError on malformed input.
ParsedSystem parse_system(std::istream& in);
ParsedSystem parse_system_from_string(const std::string& text);

std::string print_system(const Ars& sys);
std::string print_system(const CommArs& sys);
std::string print_system(const LabelledArs& sys);
std::string print_system(const LabelledCommArs& sys);
std::string print_system(const ParsedSystem& sys);

/// Graphviz export: solid arrows for ->, dashed for ~>, label attributes for
/// labelled steps. Deterministic node and edge order.
std::string export_dot(const ParsedSystem& sys);

}  // namespace rewr
