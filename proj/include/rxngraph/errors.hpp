// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RXNGRAPH_ERRORS_HPP
#define RXNGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rxngraph {

// Bad user-facing input: malformed SMILES, config files, datasets. CLI exit 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric breakdown: non-finite tensor values, diverging updates. CLI exit 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse failure with location info. `offset` is a byte offset into the text
// handed to the parser; `fragment` is the dot-separated fragment index within
// a reaction line (-1 when parsing a lone molecule).
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset, int fragment = -1)
      : InputError(format(what, offset, fragment)),
        offset_(offset),
        fragment_(fragment),
        reason_(what) {}

  std::size_t offset() const { return offset_; }
  int fragment() const { return fragment_; }
  const std::string& reason() const { return reason_; }

  static ParseError in_fragment(const ParseError& e, int fragment,
                                std::size_t fragment_start) {
    return ParseError(e.reason(), fragment_start + e.offset(), fragment);
  }

 private:
  static std::string format(const std::string& what, std::size_t offset,
                            int fragment) {
    std::string s = what + " (byte offset " + std::to_string(offset);
    if (fragment >= 0) s += ", fragment " + std::to_string(fragment);
    s += ")";
    return s;
  }

  std::size_t offset_;
  int fragment_;
  std::string reason_;
};

}  // namespace rxngraph

#endif  // RXNGRAPH_ERRORS_HPP
