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

// A reduced Python syntax tree. It keeps exactly what name-binding analysis
// needs: which names are read or bound, and which scopes they live in.
// Operators, literals and attribute names are dropped.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace resplit::py {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Param {
  std::string name;
  ExprPtr annotation;
  ExprPtr default_value;
};

struct Comprehension {
  ExprPtr target;
  ExprPtr iter;
  std::vector<ExprPtr> ifs;
};

enum class ExprKind {
  Name,
  Attribute,   // kids[0] = value
  Subscript,   // kids[0] = value, kids[1..] = slice parts
  Starred,     // kids[0]
  Tuple,       // kids = elements (also list displays; assignable)
  Other,       // any other expression: kids evaluated left to right
  NamedExpr,   // kids[0] = Name target, kids[1] = value
  Lambda,      // params, kids[0] = body
  Comp,        // kids = element (or key, value); generators
};

struct Expr {
  ExprKind kind = ExprKind::Other;
  std::string id;  // Name only
  std::vector<ExprPtr> kids;
  std::vector<Param> params;              // Lambda
  std::vector<Comprehension> generators;  // Comp
};

inline ExprPtr make_expr(ExprKind kind) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  return e;
}

inline ExprPtr make_name(std::string id) {
  auto e = make_expr(ExprKind::Name);
  e->id = std::move(id);
  return e;
}

struct Pattern {
  enum class Kind { Capture, Wildcard, Value, Sequence, Star, Mapping, Class, Or, As };
  Kind kind = Kind::Wildcard;
  std::string name;          // Capture, Star (may be empty for `*_`), As, Mapping rest
  ExprPtr value;             // Value, Class (the class reference)
  std::vector<ExprPtr> keys;  // Mapping keys
  std::vector<Pattern> subs;
};

struct Stmt;
using Body = std::vector<Stmt>;

/// pass, break, continue, return, raise, assert and bare expressions: only
/// reads, evaluated left to right.
struct Eval {
  std::vector<ExprPtr> values;
};

struct Assign {
  std::vector<ExprPtr> targets;
  ExprPtr value;
};

struct AugAssign {
  ExprPtr target;
  ExprPtr value;
};

struct AnnAssign {
  ExprPtr target;
  ExprPtr annotation;
  ExprPtr value;  // may be null
};

struct Alias {
  std::string name;  // dotted module path or imported attribute; "*" for star imports
  std::optional<std::string> asname;
};

struct Import {
  std::vector<Alias> names;
};

struct ImportFrom {
  std::string module;  // empty for `from . import x`
  int level = 0;
  std::vector<Alias> names;
};

struct FunctionDef {
  std::vector<ExprPtr> decorators;
  std::string name;
  std::vector<Param> params;
  ExprPtr returns;
  Body body;
};

struct ClassDef {
  std::vector<ExprPtr> decorators;
  std::string name;
  std::vector<ExprPtr> bases;  // positional and keyword argument values
  Body body;
};

struct Delete {
  std::vector<ExprPtr> targets;
};

struct Global {
  std::vector<std::string> names;
};

struct Nonlocal {
  std::vector<std::string> names;
};

struct If {
  ExprPtr test;
  Body body;
  Body orelse;
};

struct While {
  ExprPtr test;
  Body body;
  Body orelse;
};

struct For {
  ExprPtr target;
  ExprPtr iter;
  Body body;
  Body orelse;
};

struct WithItem {
  ExprPtr context;
  ExprPtr target;  // may be null
};

struct With {
  std::vector<WithItem> items;
  Body body;
};

struct Handler {
  ExprPtr type;  // may be null
  std::optional<std::string> name;
  Body body;
};

struct Try {
  Body body;
  std::vector<Handler> handlers;
  Body orelse;
  Body finalbody;
};

struct MatchCase {
  Pattern pattern;
  ExprPtr guard;  // may be null
  Body body;
};

struct Match {
  ExprPtr subject;
  std::vector<MatchCase> cases;
};

struct TypeAlias {
  std::string name;
  ExprPtr value;
};

/// IPython magic, shell escape or help request.
struct Opaque {
  std::string text;
};

using StmtNode = std::variant<Eval, Assign, AugAssign, AnnAssign, Import, ImportFrom, FunctionDef,
                              ClassDef, Delete, Global, Nonlocal, If, While, For, With, Try,
                              Match, TypeAlias, Opaque>;

struct Stmt {
  StmtNode node;
  int first_line = 0;
  int last_line = 0;
};

/// One top-level logical line: a compound statement, or the `;`-separated
/// simple statements sharing a line.
struct TopLevel {
  Body stmts;
  int first_line = 0;
  int last_line = 0;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace resplit::py
