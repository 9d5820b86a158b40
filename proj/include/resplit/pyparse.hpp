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

// Recursive-descent parser for Python 3 (through 3.12 statement syntax,
// including `match` and parenthesized `with` items). Produces the reduced tree
// in pyast.hpp. Anything the grammar rejects raises SyntaxError.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resplit/pyast.hpp"
#include "resplit/pylex.hpp"

namespace resplit::py {

inline bool is_keyword(std::string_view word) {
  static constexpr std::string_view kKeywords[] = {
      "False", "None",   "True",    "and",      "as",   "assert", "async",  "await",
      "break", "class",  "continue", "def",     "del",  "elif",   "else",   "except",
      "finally", "for",  "from",    "global",   "if",   "import", "in",     "is",
      "lambda", "nonlocal", "not",  "or",       "pass", "raise",  "return", "try",
      "while", "with",   "yield"};
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {
    if (toks_.empty() || toks_.back().kind != Tok::End) toks_.push_back(Token{});
  }

  std::vector<TopLevel> parse_module() {
    std::vector<TopLevel> out;
    while (cur().kind != Tok::End) {
      if (cur().kind == Tok::Newline) {
        advance();
        continue;
      }
      if (cur().kind == Tok::Indent) fail("unexpected indent");
      if (cur().kind == Tok::Dedent) fail("unexpected dedent");
      TopLevel top;
      top.first_line = cur().line;
      parse_statement_into(top.stmts);
      top.last_line = last_line_;
      out.push_back(std::move(top));
    }
    return out;
  }

  /// Parses a lone expression list (an f-string replacement field).
  ExprPtr parse_expression_list() {
    ExprPtr e = at_keyword("yield") ? parse_yield() : parse_star_expressions();
    while (cur().kind == Tok::Newline) advance();
    if (cur().kind != Tok::End) fail("unexpected trailing tokens in expression");
    return e;
  }

 private:
  // --- token access ---------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(std::size_t n) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (t.kind == Tok::Name || t.kind == Tok::Number || t.kind == Tok::String ||
        t.kind == Tok::Op || t.kind == Tok::Opaque) {
      last_line_ = t.end_line;
    }
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, cur().line); }

  bool at_op(std::string_view op) const { return cur().is_op(op); }
  bool at_keyword(std::string_view kw) const { return cur().is_name(kw); }
  bool accept_op(std::string_view op) {
    if (!at_op(op)) return false;
    advance();
    return true;
  }
  bool accept_keyword(std::string_view kw) {
    if (!at_keyword(kw)) return false;
    advance();
    return true;
  }
  void expect_op(std::string_view op) {
    if (!accept_op(op)) fail("expected '" + std::string(op) + "'");
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected '" + std::string(kw) + "'");
  }
  bool at_identifier() const { return cur().kind == Tok::Name && !is_keyword(cur().text); }
  std::string expect_identifier() {
    if (!at_identifier()) fail("expected a name");
    return advance().text;
  }

  // True when the current token can begin an expression.
  bool at_expression_start() const {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Name:
        return !is_keyword(t.text) || t.text == "None" || t.text == "True" || t.text == "False" ||
               t.text == "not" || t.text == "lambda" || t.text == "await" || t.text == "yield";
      case Tok::Number:
      case Tok::String:
        return true;
      case Tok::Op:
        return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" ||
               t.text == "+" || t.text == "~" || t.text == "*" || t.text == "..." ||
               t.text == "**";
      default:
        return false;
    }
  }

  // --- statements -----------------------------------------------------------

  void parse_statement_into(Body& body) {
    if (at_compound_start()) {
      body.push_back(parse_compound());
      return;
    }
    if (at_keyword("match")) {
      const std::size_t saved = pos_;
      const int saved_line = last_line_;
      try {
        body.push_back(parse_match());
        return;
      } catch (const SyntaxError&) {
        pos_ = saved;
        last_line_ = saved_line;
      }
    }
    parse_simple_line(body);
  }

  bool at_compound_start() const {
    const Token& t = cur();
    if (t.kind == Tok::Op) return t.text == "@";
    if (t.kind != Tok::Name) return false;
    const std::string& w = t.text;
    if (w == "async") {
      const Token& n = ahead(1);
      return n.is_name("def") || n.is_name("for") || n.is_name("with");
    }
    return w == "if" || w == "while" || w == "for" || w == "try" || w == "with" || w == "def" ||
           w == "class";
  }

  Body parse_block() {
    expect_op(":");
    Body body;
    if (cur().kind == Tok::Newline) {
      advance();
      if (cur().kind != Tok::Indent) fail("expected an indented block");
      advance();
      while (cur().kind != Tok::Dedent && cur().kind != Tok::End) {
        if (cur().kind == Tok::Newline) {
          advance();
          continue;
        }
        if (cur().kind == Tok::Indent) fail("unexpected indent");
        parse_statement_into(body);
      }
      if (cur().kind == Tok::Dedent) advance();
    } else {
      parse_simple_line(body);
    }
    return body;
  }

  Stmt finish_stmt(StmtNode node, int first_line) {
    Stmt s;
    s.node = std::move(node);
    s.first_line = first_line;
    s.last_line = last_line_;
    return s;
  }

  Stmt parse_compound() {
    const int first = cur().line;
    if (at_op("@")) {
      std::vector<ExprPtr> decorators;
      while (accept_op("@")) {
        decorators.push_back(parse_named_test());
        if (cur().kind != Tok::Newline) fail("expected newline after decorator");
        advance();
      }
      accept_keyword("async");
      if (at_keyword("def")) {
        FunctionDef def = parse_def();
        def.decorators = std::move(decorators);
        return finish_stmt(std::move(def), first);
      }
      if (at_keyword("class")) {
        ClassDef cls = parse_class();
        cls.decorators = std::move(decorators);
        return finish_stmt(std::move(cls), first);
      }
      fail("decorator must precede a function or class definition");
    }
    accept_keyword("async");
    const std::string& w = cur().text;
    if (w == "def") return finish_stmt(parse_def(), first);
    if (w == "class") return finish_stmt(parse_class(), first);
    if (w == "if") return finish_stmt(parse_if(), first);
    if (w == "while") {
      advance();
      While node;
      node.test = parse_named_test();
      node.body = parse_block();
      if (accept_keyword("else")) node.orelse = parse_block();
      return finish_stmt(std::move(node), first);
    }
    if (w == "for") {
      advance();
      For node;
      node.target = parse_target_list();
      expect_keyword("in");
      node.iter = parse_star_expressions();
      node.body = parse_block();
      if (accept_keyword("else")) node.orelse = parse_block();
      return finish_stmt(std::move(node), first);
    }
    if (w == "try") return finish_stmt(parse_try(), first);
    if (w == "with") return finish_stmt(parse_with(), first);
    fail("expected a compound statement");
  }

  If parse_if() {
    advance();  // 'if' or 'elif'
    If node;
    node.test = parse_named_test();
    node.body = parse_block();
    if (at_keyword("elif")) {
      const int first = cur().line;
      If nested = parse_if();
      node.orelse.push_back(finish_stmt(std::move(nested), first));
    } else if (accept_keyword("else")) {
      node.orelse = parse_block();
    }
    return node;
  }

  Try parse_try() {
    advance();
    Try node;
    node.body = parse_block();
    while (accept_keyword("except")) {
      accept_op("*");
      Handler h;
      if (!at_op(":")) {
        h.type = parse_test();
        if (accept_op(",")) {
          // except (A, B) written without parentheses is Python 2 syntax.
          fail("multiple exception types must be parenthesized");
        }
        if (accept_keyword("as")) h.name = expect_identifier();
      }
      h.body = parse_block();
      node.handlers.push_back(std::move(h));
    }
    if (accept_keyword("else")) node.orelse = parse_block();
    if (accept_keyword("finally")) node.finalbody = parse_block();
    if (node.handlers.empty() && node.finalbody.empty()) fail("try without except or finally");
    return node;
  }

  With parse_with() {
    advance();
    With node;
    if (at_op("(")) {
      const std::size_t saved = pos_;
      const int saved_line = last_line_;
      try {
        advance();
        std::vector<WithItem> items;
        while (!at_op(")")) {
          items.push_back(parse_with_item());
          if (!accept_op(",")) break;
        }
        expect_op(")");
        if (!at_op(":")) fail("not a parenthesized with-item list");
        node.items = std::move(items);
      } catch (const SyntaxError&) {
        pos_ = saved;
        last_line_ = saved_line;
      }
    }
    if (node.items.empty()) {
      do {
        node.items.push_back(parse_with_item());
      } while (accept_op(","));
    }
    node.body = parse_block();
    return node;
  }

  WithItem parse_with_item() {
    WithItem item;
    item.context = parse_test();
    if (accept_keyword("as")) {
      item.target = parse_single_target();
    }
    return item;
  }

  FunctionDef parse_def() {
    expect_keyword("def");
    FunctionDef def;
    def.name = expect_identifier();
    if (at_op("[")) skip_type_params();
    expect_op("(");
    def.params = parse_params(")", /*annotations=*/true);
    expect_op(")");
    if (accept_op("->")) def.returns = parse_test();
    def.body = parse_block();
    return def;
  }

  ClassDef parse_class() {
    expect_keyword("class");
    ClassDef cls;
    cls.name = expect_identifier();
    if (at_op("[")) skip_type_params();
    if (accept_op("(")) {
      auto call = make_expr(ExprKind::Other);
      parse_call_args(*call);
      cls.bases = std::move(call->kids);
    }
    cls.body = parse_block();
    return cls;
  }

  void skip_type_params() {
    int depth = 0;
    do {
      if (cur().kind == Tok::End || cur().kind == Tok::Newline) fail("unterminated type parameters");
      if (at_op("[")) ++depth;
      if (at_op("]")) --depth;
      advance();
    } while (depth > 0);
  }

  std::vector<Param> parse_params(std::string_view closer, bool annotations) {
    std::vector<Param> params;
    while (!at_op(closer)) {
      if (accept_op("/")) {
      } else if (accept_op("**") || accept_op("*")) {
        if (at_identifier()) {
          Param p;
          p.name = advance().text;
          if (annotations && accept_op(":")) {
            p.annotation = at_op("*") ? parse_star_expr() : parse_test();
          }
          params.push_back(std::move(p));
        }
      } else {
        Param p;
        p.name = expect_identifier();
        if (annotations && accept_op(":")) p.annotation = parse_test();
        if (accept_op("=")) p.default_value = parse_test();
        params.push_back(std::move(p));
      }
      if (!accept_op(",")) break;
    }
    return params;
  }

  Stmt parse_match() {
    const int first = cur().line;
    advance();  // 'match'
    Match node;
    node.subject = parse_star_named_expressions();
    expect_op(":");
    if (cur().kind != Tok::Newline) fail("expected newline after match subject");
    advance();
    if (cur().kind != Tok::Indent) fail("expected an indented block of cases");
    advance();
    while (cur().kind != Tok::Dedent && cur().kind != Tok::End) {
      if (!at_keyword("case")) fail("expected 'case'");
      advance();
      MatchCase mc;
      mc.pattern = parse_patterns();
      if (accept_keyword("if")) mc.guard = parse_named_test();
      mc.body = parse_block();
      node.cases.push_back(std::move(mc));
    }
    if (node.cases.empty()) fail("match statement without cases");
    if (cur().kind == Tok::Dedent) advance();
    return finish_stmt(std::move(node), first);
  }

  void parse_simple_line(Body& body) {
    for (;;) {
      const int first = cur().line;
      StmtNode node = parse_small_stmt();
      body.push_back(finish_stmt(std::move(node), first));
      if (!accept_op(";")) break;
      if (cur().kind == Tok::Newline) break;
    }
    if (cur().kind != Tok::Newline) fail("invalid syntax");
    advance();
  }

  StmtNode parse_small_stmt() {
    const Token& t = cur();
    if (t.kind == Tok::Opaque) {
      Opaque op{advance().text};
      return op;
    }
    if (t.kind == Tok::Name) {
      const std::string& w = t.text;
      if (w == "pass" || w == "break" || w == "continue") {
        advance();
        return Eval{};
      }
      if (w == "return") {
        advance();
        Eval e;
        if (at_expression_start()) e.values.push_back(parse_star_expressions());
        return e;
      }
      if (w == "raise") {
        advance();
        Eval e;
        if (at_expression_start()) {
          e.values.push_back(parse_test());
          if (accept_keyword("from")) e.values.push_back(parse_test());
        }
        return e;
      }
      if (w == "global" || w == "nonlocal") {
        advance();
        std::vector<std::string> names{expect_identifier()};
        while (accept_op(",")) names.push_back(expect_identifier());
        if (w == "global") return Global{std::move(names)};
        return Nonlocal{std::move(names)};
      }
      if (w == "del") {
        advance();
        Delete d;
        do {
          if (!at_expression_start()) break;
          d.targets.push_back(parse_target_element());
        } while (accept_op(","));
        if (d.targets.empty()) fail("del needs a target");
        for (const auto& target : d.targets) validate_target(*target);
        return d;
      }
      if (w == "assert") {
        advance();
        Eval e;
        e.values.push_back(parse_test());
        if (accept_op(",")) e.values.push_back(parse_test());
        return e;
      }
      if (w == "import") return parse_import();
      if (w == "from") return parse_from_import();
      if (w == "type" && ahead(1).kind == Tok::Name && !is_keyword(ahead(1).text) &&
          (ahead(2).is_op("=") || ahead(2).is_op("["))) {
        advance();
        TypeAlias alias;
        alias.name = expect_identifier();
        if (at_op("[")) skip_type_params();
        expect_op("=");
        alias.value = parse_test();
        return alias;
      }
    }
    return parse_expr_stmt();
  }

  std::string parse_dotted_name() {
    std::string name = expect_identifier();
    while (at_op(".") && ahead(1).kind == Tok::Name) {
      advance();
      name += '.';
      name += expect_identifier();
    }
    return name;
  }

  StmtNode parse_import() {
    advance();
    Import imp;
    do {
      Alias a;
      a.name = parse_dotted_name();
      if (accept_keyword("as")) a.asname = expect_identifier();
      imp.names.push_back(std::move(a));
    } while (accept_op(","));
    return imp;
  }

  StmtNode parse_from_import() {
    advance();
    ImportFrom imp;
    for (;;) {
      if (accept_op(".")) {
        imp.level += 1;
      } else if (accept_op("...")) {
        imp.level += 3;
      } else {
        break;
      }
    }
    if (!at_keyword("import")) imp.module = parse_dotted_name();
    if (imp.module.empty() && imp.level == 0) fail("expected module name");
    expect_keyword("import");
    if (accept_op("*")) {
      imp.names.push_back(Alias{"*", std::nullopt});
      return imp;
    }
    const bool paren = accept_op("(");
    do {
      if (paren && at_op(")")) break;
      Alias a;
      a.name = expect_identifier();
      if (accept_keyword("as")) a.asname = expect_identifier();
      imp.names.push_back(std::move(a));
    } while (accept_op(","));
    if (paren) expect_op(")");
    if (imp.names.empty()) fail("expected names to import");
    return imp;
  }

  static bool is_augassign(const Token& t) {
    static constexpr std::string_view kOps[] = {"+=", "-=", "*=", "/=", "//=", "%=", "@=",
                                                "&=", "|=", "^=", ">>=", "<<=", "**="};
    return t.kind == Tok::Op &&
           std::find(std::begin(kOps), std::end(kOps), t.text) != std::end(kOps);
  }

  StmtNode parse_expr_stmt() {
    if (!at_expression_start()) fail("invalid syntax");
    ExprPtr first = at_keyword("yield") ? parse_yield() : parse_star_expressions();
    if (accept_op(":")) {
      validate_target(*first);
      AnnAssign a;
      a.target = std::move(first);
      a.annotation = parse_test();
      if (accept_op("=")) a.value = parse_assign_value();
      return a;
    }
    if (is_augassign(cur())) {
      advance();
      validate_target(*first);
      AugAssign a;
      a.target = std::move(first);
      a.value = parse_assign_value();
      return a;
    }
    if (at_op("=")) {
      Assign a;
      a.targets.push_back(std::move(first));
      while (accept_op("=")) {
        ExprPtr rhs = parse_assign_value();
        if (at_op("=")) {
          a.targets.push_back(std::move(rhs));
        } else {
          a.value = std::move(rhs);
        }
      }
      for (const auto& target : a.targets) validate_target(*target);
      return a;
    }
    Eval e;
    e.values.push_back(std::move(first));
    return e;
  }

  ExprPtr parse_assign_value() {
    if (at_keyword("yield")) return parse_yield();
    return parse_star_expressions();
  }

  void validate_target(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Name:
      case ExprKind::Attribute:
      case ExprKind::Subscript:
        return;
      case ExprKind::Starred:
        validate_target(*e.kids[0]);
        return;
      case ExprKind::Tuple:
        for (const auto& k : e.kids) validate_target(*k);
        return;
      default:
        fail("cannot assign to expression");
    }
  }

  // --- patterns (match statement) -----------------------------------------

  Pattern parse_patterns() {
    Pattern first = at_op("*") ? parse_star_pattern() : parse_as_pattern();
    if (!at_op(",")) return first;
    Pattern seq;
    seq.kind = Pattern::Kind::Sequence;
    seq.subs.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op(":") || at_keyword("if")) break;
      seq.subs.push_back(at_op("*") ? parse_star_pattern() : parse_as_pattern());
    }
    return seq;
  }

  Pattern parse_star_pattern() {
    expect_op("*");
    Pattern p;
    p.kind = Pattern::Kind::Star;
    std::string name = expect_identifier();
    if (name != "_") p.name = std::move(name);
    return p;
  }

  Pattern parse_as_pattern() {
    Pattern p = parse_or_pattern();
    if (accept_keyword("as")) {
      Pattern as;
      as.kind = Pattern::Kind::As;
      as.name = expect_identifier();
      as.subs.push_back(std::move(p));
      return as;
    }
    return p;
  }

  Pattern parse_or_pattern() {
    Pattern first = parse_closed_pattern();
    if (!at_op("|")) return first;
    Pattern alt;
    alt.kind = Pattern::Kind::Or;
    alt.subs.push_back(std::move(first));
    while (accept_op("|")) alt.subs.push_back(parse_closed_pattern());
    return alt;
  }

  Pattern literal_pattern() {
    Pattern p;
    p.kind = Pattern::Kind::Value;
    p.value = make_expr(ExprKind::Other);
    return p;
  }

  // A literal or a dotted value reference usable as a mapping key.
  Pattern parse_value_or_literal() {
    if (cur().kind == Tok::Number || at_op("-")) {
      accept_op("-");
      if (cur().kind != Tok::Number) fail("expected a number in pattern");
      advance();
      if (at_op("+") || at_op("-")) {
        advance();
        if (cur().kind != Tok::Number) fail("expected a complex literal in pattern");
        advance();
      }
      return literal_pattern();
    }
    if (cur().kind == Tok::String) {
      while (cur().kind == Tok::String) advance();
      return literal_pattern();
    }
    if (at_keyword("None") || at_keyword("True") || at_keyword("False")) {
      advance();
      return literal_pattern();
    }
    ExprPtr ref = make_name(expect_identifier());
    while (accept_op(".")) {
      expect_identifier();
      auto attr = make_expr(ExprKind::Attribute);
      attr->kids.push_back(std::move(ref));
      ref = std::move(attr);
    }
    Pattern p;
    p.kind = Pattern::Kind::Value;
    p.value = std::move(ref);
    return p;
  }

  Pattern parse_closed_pattern() {
    if (cur().kind == Tok::Number || cur().kind == Tok::String || at_op("-") ||
        at_keyword("None") || at_keyword("True") || at_keyword("False")) {
      return parse_value_or_literal();
    }
    if (accept_op("(")) {
      if (accept_op(")")) {
        Pattern p;
        p.kind = Pattern::Kind::Sequence;
        return p;
      }
      Pattern inner = at_op("*") ? parse_star_pattern() : parse_as_pattern();
      if (!at_op(",")) {
        expect_op(")");
        return inner;
      }
      Pattern seq;
      seq.kind = Pattern::Kind::Sequence;
      seq.subs.push_back(std::move(inner));
      while (accept_op(",")) {
        if (at_op(")")) break;
        seq.subs.push_back(at_op("*") ? parse_star_pattern() : parse_as_pattern());
      }
      expect_op(")");
      return seq;
    }
    if (accept_op("[")) {
      Pattern seq;
      seq.kind = Pattern::Kind::Sequence;
      while (!at_op("]")) {
        seq.subs.push_back(at_op("*") ? parse_star_pattern() : parse_as_pattern());
        if (!accept_op(",")) break;
      }
      expect_op("]");
      return seq;
    }
    if (accept_op("{")) {
      Pattern map;
      map.kind = Pattern::Kind::Mapping;
      while (!at_op("}")) {
        if (accept_op("**")) {
          map.name = expect_identifier();
        } else {
          Pattern key = parse_value_or_literal();
          map.keys.push_back(std::move(key.value));
          expect_op(":");
          map.subs.push_back(parse_as_pattern());
        }
        if (!accept_op(",")) break;
      }
      expect_op("}");
      return map;
    }
    if (at_identifier()) {
      std::string name = advance().text;
      ExprPtr ref = make_name(name);
      bool dotted = false;
      while (accept_op(".")) {
        expect_identifier();
        auto attr = make_expr(ExprKind::Attribute);
        attr->kids.push_back(std::move(ref));
        ref = std::move(attr);
        dotted = true;
      }
      if (accept_op("(")) {
        Pattern cls;
        cls.kind = Pattern::Kind::Class;
        cls.value = std::move(ref);
        while (!at_op(")")) {
          if (at_identifier() && ahead(1).is_op("=")) {
            advance();
            advance();
          }
          cls.subs.push_back(parse_as_pattern());
          if (!accept_op(",")) break;
        }
        expect_op(")");
        return cls;
      }
      Pattern p;
      if (dotted) {
        p.kind = Pattern::Kind::Value;
        p.value = std::move(ref);
      } else if (name == "_") {
        p.kind = Pattern::Kind::Wildcard;
      } else {
        p.kind = Pattern::Kind::Capture;
        p.name = std::move(name);
      }
      return p;
    }
    fail("invalid pattern");
  }

  // --- expressions ----------------------------------------------------------

  static ExprPtr group(ExprKind kind, std::vector<ExprPtr> kids) {
    auto e = make_expr(kind);
    e->kids = std::move(kids);
    return e;
  }

  // Comma-separated star_expression list; a single element without a comma
  // is returned as is.
  ExprPtr parse_star_expressions() {
    ExprPtr first = at_op("*") ? parse_star_expr() : parse_test();
    if (!at_op(",")) return first;
    std::vector<ExprPtr> items;
    items.push_back(std::move(first));
    while (accept_op(",")) {
      if (!at_expression_start() || at_op("**")) break;
      items.push_back(at_op("*") ? parse_star_expr() : parse_test());
    }
    return group(ExprKind::Tuple, std::move(items));
  }

  ExprPtr parse_star_named_expressions() {
    ExprPtr first = at_op("*") ? parse_star_expr() : parse_named_test();
    if (!at_op(",")) return first;
    std::vector<ExprPtr> items;
    items.push_back(std::move(first));
    while (accept_op(",")) {
      if (!at_expression_start() || at_op("**")) break;
      items.push_back(at_op("*") ? parse_star_expr() : parse_named_test());
    }
    return group(ExprKind::Tuple, std::move(items));
  }

  ExprPtr parse_star_expr() {
    expect_op("*");
    return group(ExprKind::Starred, [&] {
      std::vector<ExprPtr> k;
      k.push_back(parse_bitor());
      return k;
    }());
  }

  // Targets of `for` and comprehensions.
  ExprPtr parse_target_list() {
    ExprPtr first = parse_target_element();
    if (!at_op(",")) {
      validate_target(*first);
      return first;
    }
    std::vector<ExprPtr> items;
    items.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_keyword("in") || !at_expression_start()) break;
      items.push_back(parse_target_element());
    }
    auto tuple = group(ExprKind::Tuple, std::move(items));
    validate_target(*tuple);
    return tuple;
  }

  ExprPtr parse_target_element() { return at_op("*") ? parse_star_expr() : parse_bitor(); }

  ExprPtr parse_single_target() {
    ExprPtr t = parse_target_element();
    validate_target(*t);
    return t;
  }

  ExprPtr parse_named_test() {
    if (at_identifier() && ahead(1).is_op(":=")) {
      auto e = make_expr(ExprKind::NamedExpr);
      e->kids.push_back(make_name(advance().text));
      advance();
      e->kids.push_back(parse_test());
      return e;
    }
    return parse_test();
  }

  ExprPtr parse_test() {
    if (at_keyword("lambda")) return parse_lambda(/*nocond=*/false);
    ExprPtr body = parse_or_test();
    if (accept_keyword("if")) {
      std::vector<ExprPtr> kids;
      kids.push_back(parse_or_test());
      expect_keyword("else");
      kids.push_back(std::move(body));
      kids.push_back(parse_test());
      return group(ExprKind::Other, std::move(kids));
    }
    return body;
  }

  ExprPtr parse_test_nocond() {
    if (at_keyword("lambda")) return parse_lambda(/*nocond=*/true);
    return parse_or_test();
  }

  ExprPtr parse_lambda(bool nocond) {
    expect_keyword("lambda");
    auto e = make_expr(ExprKind::Lambda);
    e->params = parse_params(":", /*annotations=*/false);
    expect_op(":");
    e->kids.push_back(nocond ? parse_test_nocond() : parse_test());
    return e;
  }

  template <typename Next, typename Match>
  ExprPtr parse_binary(Next next, Match match) {
    ExprPtr left = (this->*next)();
    if (!match()) return left;
    std::vector<ExprPtr> kids;
    kids.push_back(std::move(left));
    while (match()) {
      advance();
      kids.push_back((this->*next)());
    }
    return group(ExprKind::Other, std::move(kids));
  }

  ExprPtr parse_or_test() {
    return parse_binary(&Parser::parse_and_test, [&] { return at_keyword("or"); });
  }
  ExprPtr parse_and_test() {
    return parse_binary(&Parser::parse_not_test, [&] { return at_keyword("and"); });
  }
  ExprPtr parse_not_test() {
    if (accept_keyword("not")) return group(ExprKind::Other, one(parse_not_test()));
    return parse_comparison();
  }

  static std::vector<ExprPtr> one(ExprPtr e) {
    std::vector<ExprPtr> v;
    v.push_back(std::move(e));
    return v;
  }

  ExprPtr parse_comparison() {
    ExprPtr left = parse_bitor();
    auto at_comp = [&] {
      const Token& t = cur();
      if (t.kind == Tok::Op) {
        return t.text == "<" || t.text == ">" || t.text == "==" || t.text == ">=" ||
               t.text == "<=" || t.text == "!=";
      }
      return t.is_name("in") || t.is_name("is") || (t.is_name("not") && ahead(1).is_name("in"));
    };
    if (!at_comp()) return left;
    std::vector<ExprPtr> kids;
    kids.push_back(std::move(left));
    while (at_comp()) {
      if (accept_keyword("not")) {
        expect_keyword("in");
      } else if (accept_keyword("is")) {
        accept_keyword("not");
      } else {
        advance();
      }
      kids.push_back(parse_bitor());
    }
    return group(ExprKind::Other, std::move(kids));
  }

  ExprPtr parse_bitor() {
    return parse_binary(&Parser::parse_xor, [&] { return at_op("|"); });
  }
  ExprPtr parse_xor() {
    return parse_binary(&Parser::parse_bitand, [&] { return at_op("^"); });
  }
  ExprPtr parse_bitand() {
    return parse_binary(&Parser::parse_shift, [&] { return at_op("&"); });
  }
  ExprPtr parse_shift() {
    return parse_binary(&Parser::parse_arith, [&] { return at_op("<<") || at_op(">>"); });
  }
  ExprPtr parse_arith() {
    return parse_binary(&Parser::parse_term, [&] { return at_op("+") || at_op("-"); });
  }
  ExprPtr parse_term() {
    return parse_binary(&Parser::parse_factor, [&] {
      return at_op("*") || at_op("/") || at_op("//") || at_op("%") || at_op("@");
    });
  }

  ExprPtr parse_factor() {
    if (accept_op("+") || accept_op("-") || accept_op("~")) {
      return group(ExprKind::Other, one(parse_factor()));
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base;
    if (accept_keyword("await")) {
      base = group(ExprKind::Other, one(parse_primary()));
    } else {
      base = parse_primary();
    }
    if (accept_op("**")) {
      std::vector<ExprPtr> kids;
      kids.push_back(std::move(base));
      kids.push_back(parse_factor());
      return group(ExprKind::Other, std::move(kids));
    }
    return base;
  }

  ExprPtr parse_primary() {
    ExprPtr e = parse_atom();
    for (;;) {
      if (accept_op(".")) {
        expect_identifier_or_keyword();
        e = group(ExprKind::Attribute, one(std::move(e)));
      } else if (accept_op("(")) {
        auto call = make_expr(ExprKind::Other);
        call->kids.push_back(std::move(e));
        parse_call_args(*call);
        e = std::move(call);
      } else if (accept_op("[")) {
        auto sub = make_expr(ExprKind::Subscript);
        sub->kids.push_back(std::move(e));
        do {
          if (at_op("]")) break;
          sub->kids.push_back(parse_slice());
        } while (accept_op(","));
        expect_op("]");
        e = std::move(sub);
      } else {
        return e;
      }
    }
  }

  void expect_identifier_or_keyword() {
    if (cur().kind != Tok::Name) fail("expected attribute name");
    advance();
  }

  // Consumes through the closing ')'. Argument values are appended to kids;
  // keyword names are dropped.
  void parse_call_args(Expr& call) {
    while (!at_op(")")) {
      if (accept_op("**") || accept_op("*")) {
        call.kids.push_back(parse_test());
      } else if (at_identifier() && ahead(1).is_op("=")) {
        advance();
        advance();
        call.kids.push_back(parse_test());
      } else {
        ExprPtr arg = parse_named_test();
        if (at_keyword("for") || (at_keyword("async") && ahead(1).is_name("for"))) {
          arg = parse_comprehension(one(std::move(arg)));
        }
        call.kids.push_back(std::move(arg));
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
  }

  ExprPtr parse_slice() {
    std::vector<ExprPtr> parts;
    if (!at_op(":")) {
      ExprPtr lower = at_op("*") ? parse_star_expr() : parse_named_test();
      if (!at_op(":")) return lower;
      parts.push_back(std::move(lower));
    }
    expect_op(":");
    if (!at_op(":") && !at_op(",") && !at_op("]")) parts.push_back(parse_test());
    if (accept_op(":")) {
      if (!at_op(",") && !at_op("]")) parts.push_back(parse_test());
    }
    return group(ExprKind::Other, std::move(parts));
  }

  // `elements` holds the already-parsed element (or key and value).
  ExprPtr parse_comprehension(std::vector<ExprPtr> elements) {
    auto comp = make_expr(ExprKind::Comp);
    comp->kids = std::move(elements);
    while (at_keyword("for") || (at_keyword("async") && ahead(1).is_name("for"))) {
      accept_keyword("async");
      expect_keyword("for");
      Comprehension gen;
      gen.target = parse_target_list();
      expect_keyword("in");
      gen.iter = parse_or_test();
      while (accept_keyword("if")) gen.ifs.push_back(parse_test_nocond());
      comp->generators.push_back(std::move(gen));
    }
    return comp;
  }

  bool at_comp_for() const {
    return at_keyword("for") || (at_keyword("async") && ahead(1).is_name("for"));
  }

  ExprPtr parse_yield() {
    expect_keyword("yield");
    auto e = make_expr(ExprKind::Other);
    if (accept_keyword("from")) {
      e->kids.push_back(parse_test());
    } else if (at_expression_start()) {
      e->kids.push_back(parse_star_expressions());
    }
    return e;
  }

  ExprPtr parse_atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Name: {
        if (t.text == "None" || t.text == "True" || t.text == "False") {
          advance();
          return make_expr(ExprKind::Other);
        }
        if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
        return make_name(advance().text);
      }
      case Tok::Number:
        advance();
        return make_expr(ExprKind::Other);
      case Tok::String: {
        auto e = make_expr(ExprKind::Other);
        while (cur().kind == Tok::String) {
          for (const std::string& field : cur().fields) e->kids.push_back(parse_field(field));
          advance();
        }
        return e;
      }
      case Tok::Op:
        if (t.text == "...") {
          advance();
          return make_expr(ExprKind::Other);
        }
        if (t.text == "(") return parse_paren();
        if (t.text == "[") return parse_list();
        if (t.text == "{") return parse_brace();
        break;
      default:
        break;
    }
    fail("invalid syntax");
  }

  ExprPtr parse_paren() {
    expect_op("(");
    if (accept_op(")")) return make_expr(ExprKind::Tuple);
    if (at_keyword("yield")) {
      ExprPtr y = parse_yield();
      expect_op(")");
      return y;
    }
    ExprPtr first = at_op("*") ? parse_star_expr() : parse_named_test();
    if (at_comp_for()) {
      ExprPtr comp = parse_comprehension(one(std::move(first)));
      expect_op(")");
      return comp;
    }
    if (!at_op(",")) {
      expect_op(")");
      return first;
    }
    std::vector<ExprPtr> items;
    items.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op(")")) break;
      items.push_back(at_op("*") ? parse_star_expr() : parse_named_test());
    }
    expect_op(")");
    return group(ExprKind::Tuple, std::move(items));
  }

  ExprPtr parse_list() {
    expect_op("[");
    std::vector<ExprPtr> items;
    if (accept_op("]")) return group(ExprKind::Tuple, std::move(items));
    ExprPtr first = at_op("*") ? parse_star_expr() : parse_named_test();
    if (at_comp_for()) {
      ExprPtr comp = parse_comprehension(one(std::move(first)));
      expect_op("]");
      return comp;
    }
    items.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op("]")) break;
      items.push_back(at_op("*") ? parse_star_expr() : parse_named_test());
    }
    expect_op("]");
    return group(ExprKind::Tuple, std::move(items));
  }

  ExprPtr parse_brace() {
    expect_op("{");
    std::vector<ExprPtr> items;
    if (accept_op("}")) return group(ExprKind::Other, std::move(items));
    // First element decides dict vs set.
    bool is_dict = false;
    if (accept_op("**")) {
      is_dict = true;
      items.push_back(parse_bitor());
    } else {
      ExprPtr first = at_op("*") ? parse_star_expr() : parse_named_test();
      if (accept_op(":")) {
        is_dict = true;
        std::vector<ExprPtr> kv;
        kv.push_back(std::move(first));
        kv.push_back(parse_test());
        if (at_comp_for()) {
          ExprPtr comp = parse_comprehension(std::move(kv));
          expect_op("}");
          return comp;
        }
        for (auto& k : kv) items.push_back(std::move(k));
      } else {
        if (at_comp_for()) {
          ExprPtr comp = parse_comprehension(one(std::move(first)));
          expect_op("}");
          return comp;
        }
        items.push_back(std::move(first));
      }
    }
    while (accept_op(",")) {
      if (at_op("}")) break;
      if (is_dict) {
        if (accept_op("**")) {
          items.push_back(parse_bitor());
        } else {
          items.push_back(parse_test());
          expect_op(":");
          items.push_back(parse_test());
        }
      } else {
        items.push_back(at_op("*") ? parse_star_expr() : parse_named_test());
      }
    }
    expect_op("}");
    return group(ExprKind::Other, std::move(items));
  }

  // f-string replacement field. Falls back to reading bare identifiers when
  // the field text is not a parseable expression on its own.
  static ExprPtr parse_field(const std::string& field) {
    try {
      Parser sub(tokenize("(" + field + ")"));
      return sub.parse_expression_list();
    } catch (const SyntaxError&) {
      auto e = make_expr(ExprKind::Other);
      bool after_dot = false;
      for (const Token& t : tokenize(field, /*lenient=*/true)) {
        if (t.kind == Tok::Name && !is_keyword(t.text) && !after_dot) {
          e->kids.push_back(make_name(t.text));
        }
        after_dot = t.is_op(".");
      }
      return e;
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int last_line_ = 0;
};

inline std::vector<TopLevel> parse_module(std::string_view source) {
  return Parser(tokenize(source)).parse_module();
}

}  // namespace resplit::py
