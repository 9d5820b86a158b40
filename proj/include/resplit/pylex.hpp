// Copyright 2026 The ReSplit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Tokenizer for Python 3 source as it appears in notebook code cells.
//
// Besides the usual token stream it recognizes IPython line syntax: a logical
// line that starts with '%', '!' or '?' (or ends in a help suffix such as
// `obj?`) becomes a single Opaque token. Inside f-strings the replacement
// field expressions are captured so the analyzer can see the names they read.

#include <array>
#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resplit::py {

enum class Tok { Name, Number, String, Op, Newline, Indent, Dedent, Opaque, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;      // 1-based line of the first character
  int end_line = 0;  // line of the last character
  std::vector<std::string> fields;  // f-string replacement expressions

  bool is_op(std::string_view op) const { return kind == Tok::Op && text == op; }
  bool is_name(std::string_view name) const { return kind == Tok::Name && text == name; }
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}
inline bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

inline bool is_string_prefix(std::string_view word) {
  if (word.empty() || word.size() > 2) return false;
  bool raw = false, bytes = false, fmt = false, uni = false;
  for (char ch : word) {
    switch (std::tolower(static_cast<unsigned char>(ch))) {
      case 'r': if (raw) return false; raw = true; break;
      case 'b': if (bytes) return false; bytes = true; break;
      case 'f': if (fmt) return false; fmt = true; break;
      case 'u': if (uni) return false; uni = true; break;
      default: return false;
    }
  }
  if (uni && word.size() > 1) return false;
  return !(bytes && fmt);
}

inline bool prefix_has_f(std::string_view word) {
  for (char ch : word) {
    if (ch == 'f' || ch == 'F') return true;
  }
  return false;
}

// Longest first within each length class.
inline constexpr std::array<std::string_view, 48> kOperators = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=",
    ">=",  "==",  "!=",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "@=",
    "+",   "-",   "*",   "/",   "%",   "@",  "&",  "|",  "^",  "~",  "<",  ">",
    "(",   ")",   "[",   "]",   "{",   "}",  ",",  ":",  ";",  ".",  "=",  "!"};

}  // namespace detail

class Lexer {
 public:
  /// In lenient mode the lexer never throws: malformed input degrades into
  /// best-effort tokens. Used for clone detection over arbitrary cells.
  explicit Lexer(std::string_view src, bool lenient = false) : src_(src), lenient_(lenient) {}

  std::vector<Token> tokenize() {
    while (true) {
      if (at_line_start_ && depth_ == 0) {
        if (!begin_logical_line()) break;
        continue;
      }
      skip_inline_space();
      if (eof()) break;
      const char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') ++pos_;
        continue;
      }
      if (c == '\\' && newline_at(pos_ + 1)) {
        ++pos_;
        consume_newline();
        continue;
      }
      if (newline_at(pos_)) {
        consume_newline();
        if (depth_ == 0) {
          emit(Tok::Newline, "", line_ - 1, line_ - 1);
          at_line_start_ = true;
        }
        continue;
      }
      lex_token();
    }
    finish();
    return std::move(tokens_);
  }

 private:
  bool eof() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  bool newline_at(std::size_t p) const {
    if (p >= src_.size()) return false;
    return src_[p] == '\n' || (src_[p] == '\r' && p + 1 < src_.size() && src_[p + 1] == '\n');
  }
  void consume_newline() {
    if (src_[pos_] == '\r') ++pos_;
    ++pos_;
    ++line_;
  }
  void skip_inline_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\f' ||
                      (peek() == '\r' && !newline_at(pos_)))) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, line_); }

  void emit(Tok kind, std::string text, int line, int end_line) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.end_line = end_line;
    tokens_.push_back(std::move(t));
  }

  std::string_view rest_of_line() const {
    std::size_t end = pos_;
    while (end < src_.size() && src_[end] != '\n') ++end;
    std::string_view line = src_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }

  static bool is_help_suffix_line(std::string_view line) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty() || line.back() != '?') return false;
    while (!line.empty() && line.back() == '?') line.remove_suffix(1);
    if (line.empty() || !detail::is_ident_start(static_cast<unsigned char>(line.front()))) {
      return false;
    }
    for (char ch : line) {
      if (!detail::is_ident_char(static_cast<unsigned char>(ch)) && ch != '.') return false;
    }
    return true;
  }

  // Handles indentation, blank lines and IPython line syntax at the start of
  // a logical line. Returns false at end of input.
  bool begin_logical_line() {
    int col = 0;
    while (!eof()) {
      const char c = peek();
      if (c == ' ') {
        ++col;
      } else if (c == '\t') {
        col = (col / 8 + 1) * 8;
      } else if (c == '\f') {
        col = 0;
      } else if (c == '\r' && !newline_at(pos_)) {
      } else {
        break;
      }
      ++pos_;
    }
    if (eof()) return false;
    const char c = peek();
    if (c == '#' || newline_at(pos_)) {
      while (!eof() && !newline_at(pos_)) ++pos_;
      if (!eof()) consume_newline();
      return true;
    }
    if (c == '\\' && newline_at(pos_ + 1)) {
      // A lone continuation at line start joins with the next line.
      ++pos_;
      consume_newline();
      at_line_start_ = false;
      indent_to(col);
      return true;
    }
    const bool magic = c == '%' || c == '!' || c == '?' || is_help_suffix_line(rest_of_line());
    indent_to(col);
    at_line_start_ = false;
    if (magic) {
      const int first = line_;
      std::string text;
      for (;;) {
        std::string_view piece = rest_of_line();
        text.append(piece);
        pos_ += piece.size();
        while (!eof() && peek() != '\n') ++pos_;  // stray '\r'
        const bool continued = !piece.empty() && piece.back() == '\\';
        if (eof()) break;
        consume_newline();
        if (!continued) break;
        text += '\n';
      }
      const int last = eof() && !src_.empty() && src_.back() != '\n' ? line_ : line_ - 1;
      emit(Tok::Opaque, std::move(text), first, last);
      emit(Tok::Newline, "", last, last);
      at_line_start_ = true;
    }
    return true;
  }

  void indent_to(int col) {
    if (col > indents_.back()) {
      indents_.push_back(col);
      emit(Tok::Indent, "", line_, line_);
      return;
    }
    while (col < indents_.back()) {
      indents_.pop_back();
      emit(Tok::Dedent, "", line_, line_);
    }
    if (col != indents_.back()) {
      if (!lenient_) fail("unindent does not match any outer indentation level");
      indents_.push_back(col);
    }
  }

  void lex_token() {
    const unsigned char c = static_cast<unsigned char>(peek());
    const int line = line_;
    if (detail::is_ident_start(c)) {
      const std::size_t start = pos_;
      while (!eof() && detail::is_ident_char(static_cast<unsigned char>(peek()))) ++pos_;
      std::string_view word = src_.substr(start, pos_ - start);
      if ((peek() == '\'' || peek() == '"') && detail::is_string_prefix(word)) {
        lex_string(start, detail::prefix_has_f(word));
        return;
      }
      emit(Tok::Name, std::string(word), line, line);
      return;
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number();
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string(pos_, false);
      return;
    }
    for (std::string_view op : detail::kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        if (op == "!") {
          if (!lenient_) fail("invalid character '!'");
        }
        pos_ += op.size();
        track_brackets(op);
        emit(Tok::Op, std::string(op), line, line);
        return;
      }
    }
    if (!lenient_) fail(std::string("invalid character '") + static_cast<char>(c) + "'");
    ++pos_;
    emit(Tok::Op, std::string(1, static_cast<char>(c)), line, line);
  }

  void track_brackets(std::string_view op) {
    if (op == "(" || op == "[" || op == "{") {
      ++depth_;
    } else if (op == ")" || op == "]" || op == "}") {
      if (depth_ == 0) {
        if (!lenient_) fail("unmatched '" + std::string(op) + "'");
        return;
      }
      --depth_;
    }
  }

  void lex_number() {
    const std::size_t start = pos_;
    const int line = line_;
    const bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
    while (!eof()) {
      const char ch = peek();
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.') {
        ++pos_;
      } else if ((ch == '+' || ch == '-') && !hex &&
                 (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E')) {
        ++pos_;
      } else {
        break;
      }
    }
    emit(Tok::Number, std::string(src_.substr(start, pos_ - start)), line, line);
  }

  // `start` points at the prefix (or the quote when there is none).
  void lex_string(std::size_t start, bool fstring) {
    const int line = line_;
    std::vector<std::string> fields;
    if (!scan_string_body(fstring, fields)) {
      // Lenient: unterminated string runs to the end of its line.
      while (!eof() && !newline_at(pos_)) ++pos_;
    }
    Token t;
    t.kind = Tok::String;
    t.text = std::string(src_.substr(start, pos_ - start));
    t.line = line;
    t.end_line = line_;
    t.fields = std::move(fields);
    tokens_.push_back(std::move(t));
  }

  // pos_ is at the opening quote. Leaves pos_ after the closing quote.
  bool scan_string_body(bool fstring, std::vector<std::string>& fields) {
    const char quote = peek();
    const bool triple = peek(1) == quote && peek(2) == quote;
    pos_ += triple ? 3 : 1;
    for (;;) {
      if (eof()) {
        if (!lenient_) fail("unterminated string literal");
        return false;
      }
      const char ch = peek();
      if (ch == quote && (!triple || (peek(1) == quote && peek(2) == quote))) {
        pos_ += triple ? 3 : 1;
        return true;
      }
      if (ch == '\\') {
        ++pos_;
        if (newline_at(pos_)) {
          consume_newline();
        } else if (!eof()) {
          ++pos_;
        }
        continue;
      }
      if (newline_at(pos_)) {
        if (!triple) {
          if (!lenient_) fail("unterminated string literal");
          return false;
        }
        consume_newline();
        continue;
      }
      if (fstring && ch == '{') {
        if (peek(1) == '{') {
          pos_ += 2;
          continue;
        }
        ++pos_;
        if (!scan_fstring_field(fields)) return false;
        continue;
      }
      ++pos_;
    }
  }

  // pos_ is just after '{'. Consumes through the matching '}'.
  bool scan_fstring_field(std::vector<std::string>& fields) {
    const std::size_t start = pos_;
    int depth = 0;
    auto record = [&](std::size_t end) {
      std::string expr(src_.substr(start, end - start));
      while (!expr.empty() && std::isspace(static_cast<unsigned char>(expr.back()))) expr.pop_back();
      if (!expr.empty() && expr.back() == '=') {
        const char before = expr.size() > 1 ? expr[expr.size() - 2] : ' ';
        if (before != '=' && before != '!' && before != '<' && before != '>') expr.pop_back();
      }
      fields.push_back(std::move(expr));
    };
    for (;;) {
      if (eof()) {
        if (!lenient_) fail("unterminated f-string replacement field");
        return false;
      }
      const char ch = peek();
      if (newline_at(pos_)) {
        consume_newline();
        continue;
      }
      if (ch == '\'' || ch == '"') {
        std::vector<std::string> nested;
        if (!scan_string_body(false, nested)) return false;
        continue;
      }
      if (detail::is_ident_start(static_cast<unsigned char>(ch))) {
        const std::size_t word_start = pos_;
        while (!eof() && detail::is_ident_char(static_cast<unsigned char>(peek()))) ++pos_;
        std::string_view word = src_.substr(word_start, pos_ - word_start);
        if ((peek() == '\'' || peek() == '"') && detail::is_string_prefix(word)) {
          std::vector<std::string> nested;
          if (!scan_string_body(detail::prefix_has_f(word), nested)) return false;
        }
        continue;
      }
      if (ch == '(' || ch == '[' || ch == '{') {
        ++depth;
      } else if (ch == ')' || ch == ']' || (ch == '}' && depth > 0)) {
        --depth;
      } else if (ch == '}') {
        record(pos_);
        ++pos_;
        return true;
      } else if (depth == 0 && ch == '!' && peek(1) != '=') {
        record(pos_);
        while (!eof() && peek() != ':' && peek() != '}' && !newline_at(pos_)) ++pos_;
        if (peek() == ':') return scan_format_spec(fields);
        if (peek() == '}') {
          ++pos_;
          return true;
        }
        if (!lenient_) fail("malformed f-string conversion");
        return false;
      } else if (depth == 0 && ch == ':') {
        record(pos_);
        return scan_format_spec(fields);
      }
      ++pos_;
    }
  }

  // pos_ is at ':'. Format specs may nest replacement fields.
  bool scan_format_spec(std::vector<std::string>& fields) {
    ++pos_;
    for (;;) {
      if (eof()) {
        if (!lenient_) fail("unterminated f-string format spec");
        return false;
      }
      const char ch = peek();
      if (ch == '{') {
        ++pos_;
        if (!scan_fstring_field(fields)) return false;
        continue;
      }
      if (ch == '}') {
        ++pos_;
        return true;
      }
      if (newline_at(pos_)) {
        consume_newline();
        continue;
      }
      ++pos_;
    }
  }

  void finish() {
    if (depth_ > 0 && !lenient_) fail("unexpected end of input inside brackets");
    if (!tokens_.empty() && tokens_.back().kind != Tok::Newline) {
      emit(Tok::Newline, "", line_, line_);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(Tok::Dedent, "", line_, line_);
    }
    emit(Tok::End, "", line_, line_);
  }

  std::string_view src_;
  bool lenient_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<int> indents_{0};
  std::vector<Token> tokens_;
};

inline std::vector<Token> tokenize(std::string_view src, bool lenient = false) {
  return Lexer(src, lenient).tokenize();
}

}  // namespace resplit::py
