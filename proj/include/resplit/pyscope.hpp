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

// Module-level name binding analysis for one top-level statement.
//
// Every read of a name that resolves to module scope becomes a Use event and
// every binding of a module-level name becomes a Define event. Nested
// function, lambda, class and comprehension scopes follow Python's rules:
// names bound inside them are local, class scopes are invisible to nested
// functions, and `global` redirects bindings to module scope. Function and
// lambda bodies run after the statement that creates them, so their events
// are emitted after the statement's own.

#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "resplit/pyast.hpp"

namespace resplit::py {

enum class NameKind { Define, Use };

struct NameEvent {
  std::string name;
  NameKind kind = NameKind::Use;

  friend bool operator==(const NameEvent&, const NameEvent&) = default;
};

struct StatementEvents {
  std::vector<NameEvent> ordered;      // evaluation order
  std::set<std::string> defs;
  std::set<std::string> uses;          // reads not preceded by a binding in the same statement
  std::vector<std::string> imports;    // root packages imported anywhere in the statement
};

class NameAnalyzer {
 public:
  StatementEvents analyze(const Body& stmts) {
    scopes_.clear();
    deferred_.clear();
    events_.clear();
    imports_.clear();
    mode_ = Mode::Resolve;
    comp_depth_ = 0;

    Scope& module = new_scope(ScopeKind::Module, nullptr);
    visit_body(stmts, module);
    // Deferred bodies may enqueue further nested bodies.
    for (std::size_t i = 0; i < deferred_.size(); ++i) {
      Deferred d = deferred_[i];
      if (d.body) visit_body(*d.body, *d.scope);
      if (d.expr) visit_expr(*d.expr, *d.scope);
    }

    StatementEvents out;
    out.ordered = std::move(events_);
    for (const NameEvent& e : out.ordered) {
      if (e.kind == NameKind::Define) {
        out.defs.insert(e.name);
      } else if (!out.defs.count(e.name)) {
        out.uses.insert(e.name);
      }
    }
    out.imports = std::move(imports_);
    return out;
  }

 private:
  enum class Mode { Collect, Resolve };
  enum class ScopeKind { Module, Function, Class, Comprehension };

  struct Scope {
    ScopeKind kind;
    Scope* parent;
    std::set<std::string> locals;
    std::set<std::string> globals;
    std::set<std::string> nonlocals;
  };

  struct Deferred {
    Scope* scope;
    const Body* body;
    const Expr* expr;
  };

  Scope& new_scope(ScopeKind kind, Scope* parent) {
    scopes_.push_back(Scope{kind, parent, {}, {}, {}});
    return scopes_.back();
  }

  // Nearest scope a walrus target binds in.
  static Scope& binding_scope(Scope& s) {
    Scope* p = &s;
    while (p->kind == ScopeKind::Comprehension && p->parent) p = p->parent;
    return *p;
  }

  void emit(NameKind kind, const std::string& name) { events_.push_back(NameEvent{name, kind}); }

  void load(const std::string& name, Scope& scope) {
    if (mode_ == Mode::Collect) return;
    bool first = true;
    for (Scope* s = &scope; s; s = s->parent, first = false) {
      if (s->kind == ScopeKind::Module || s->globals.count(name)) {
        emit(NameKind::Use, name);
        return;
      }
      if (s->kind == ScopeKind::Class && !first) continue;
      if (s->locals.count(name) || s->nonlocals.count(name)) return;
    }
  }

  void bind(const std::string& name, Scope& scope) {
    if (mode_ == Mode::Collect) {
      if (comp_depth_ == 0) scope.locals.insert(name);
      return;
    }
    if (scope.kind == ScopeKind::Module || scope.globals.count(name)) {
      emit(NameKind::Define, name);
    }
  }

  void bind_walrus(const std::string& name, Scope& scope) {
    if (mode_ == Mode::Collect) {
      scope.locals.insert(name);
      return;
    }
    Scope& target = binding_scope(scope);
    if (target.kind == ScopeKind::Module || target.globals.count(name)) {
      emit(NameKind::Define, name);
    }
  }

  // Collects the names bound directly in `scope` by `body`.
  void collect(const Body& body, Scope& scope) {
    const Mode saved_mode = mode_;
    const int saved_depth = comp_depth_;
    mode_ = Mode::Collect;
    comp_depth_ = 0;
    visit_body(body, scope);
    mode_ = saved_mode;
    comp_depth_ = saved_depth;
  }

  void visit_body(const Body& body, Scope& scope) {
    for (const Stmt& s : body) visit_stmt(s, scope);
  }

  void visit_all(const std::vector<ExprPtr>& exprs, Scope& scope) {
    for (const auto& e : exprs) {
      if (e) visit_expr(*e, scope);
    }
  }

  void visit_params(const std::vector<Param>& params, Scope& scope) {
    for (const Param& p : params) {
      if (p.default_value) visit_expr(*p.default_value, scope);
    }
    for (const Param& p : params) {
      if (p.annotation) visit_expr(*p.annotation, scope);
    }
  }

  Scope& open_function_scope(const std::vector<Param>& params, Scope& parent) {
    Scope& fn = new_scope(ScopeKind::Function, &parent);
    for (const Param& p : params) fn.locals.insert(p.name);
    return fn;
  }

  void record_import(const std::string& module) {
    if (mode_ != Mode::Resolve || module.empty()) return;
    imports_.push_back(module.substr(0, module.find('.')));
  }

  void visit_stmt(const Stmt& stmt, Scope& scope) {
    std::visit(
        Overloaded{
            [&](const Eval& s) { visit_all(s.values, scope); },
            [&](const Assign& s) {
              if (s.value) visit_expr(*s.value, scope);
              for (const auto& t : s.targets) visit_target(*t, scope);
            },
            [&](const AugAssign& s) {
              if (s.target->kind == ExprKind::Name) load(s.target->id, scope);
              if (s.value) visit_expr(*s.value, scope);
              visit_target(*s.target, scope);
            },
            [&](const AnnAssign& s) {
              if (s.annotation) visit_expr(*s.annotation, scope);
              if (s.value) visit_expr(*s.value, scope);
              if (s.value || mode_ == Mode::Collect) {
                visit_target(*s.target, scope);
              } else if (s.target->kind != ExprKind::Name) {
                visit_expr(*s.target, scope);
              }
            },
            [&](const Import& s) {
              for (const Alias& a : s.names) {
                record_import(a.name);
                bind(a.asname ? *a.asname : a.name.substr(0, a.name.find('.')), scope);
              }
            },
            [&](const ImportFrom& s) {
              if (s.level == 0) record_import(s.module);
              for (const Alias& a : s.names) {
                if (a.name != "*") bind(a.asname ? *a.asname : a.name, scope);
              }
            },
            [&](const FunctionDef& s) {
              visit_all(s.decorators, scope);
              visit_params(s.params, scope);
              if (s.returns) visit_expr(*s.returns, scope);
              bind(s.name, scope);
              if (mode_ == Mode::Collect) return;
              Scope& fn = open_function_scope(s.params, scope);
              collect(s.body, fn);
              deferred_.push_back(Deferred{&fn, &s.body, nullptr});
            },
            [&](const ClassDef& s) {
              visit_all(s.decorators, scope);
              visit_all(s.bases, scope);
              if (mode_ == Mode::Resolve) {
                Scope& cls = new_scope(ScopeKind::Class, &scope);
                collect(s.body, cls);
                visit_body(s.body, cls);
              }
              bind(s.name, scope);
            },
            [&](const Delete& s) {
              for (const auto& t : s.targets) visit_delete(*t, scope);
            },
            [&](const Global& s) {
              if (mode_ == Mode::Collect) scope.globals.insert(s.names.begin(), s.names.end());
            },
            [&](const Nonlocal& s) {
              if (mode_ == Mode::Collect) scope.nonlocals.insert(s.names.begin(), s.names.end());
            },
            [&](const If& s) {
              visit_expr(*s.test, scope);
              visit_body(s.body, scope);
              visit_body(s.orelse, scope);
            },
            [&](const While& s) {
              visit_expr(*s.test, scope);
              visit_body(s.body, scope);
              visit_body(s.orelse, scope);
            },
            [&](const For& s) {
              visit_expr(*s.iter, scope);
              visit_target(*s.target, scope);
              visit_body(s.body, scope);
              visit_body(s.orelse, scope);
            },
            [&](const With& s) {
              for (const WithItem& item : s.items) {
                visit_expr(*item.context, scope);
                if (item.target) visit_target(*item.target, scope);
              }
              visit_body(s.body, scope);
            },
            [&](const Try& s) {
              visit_body(s.body, scope);
              for (const Handler& h : s.handlers) {
                if (h.type) visit_expr(*h.type, scope);
                if (h.name) bind(*h.name, scope);
                visit_body(h.body, scope);
              }
              visit_body(s.orelse, scope);
              visit_body(s.finalbody, scope);
            },
            [&](const Match& s) {
              visit_expr(*s.subject, scope);
              for (const MatchCase& c : s.cases) {
                visit_pattern(c.pattern, scope);
                if (c.guard) visit_expr(*c.guard, scope);
                visit_body(c.body, scope);
              }
            },
            [&](const TypeAlias& s) {
              if (s.value) visit_expr(*s.value, scope);
              bind(s.name, scope);
            },
            [&](const Opaque&) {},
        },
        stmt.node);
  }

  void visit_pattern(const Pattern& p, Scope& scope) {
    using K = Pattern::Kind;
    switch (p.kind) {
      case K::Capture:
        bind(p.name, scope);
        return;
      case K::Wildcard:
        return;
      case K::Value:
        if (p.value) visit_expr(*p.value, scope);
        return;
      case K::Star:
        if (!p.name.empty()) bind(p.name, scope);
        return;
      case K::Mapping:
        visit_all(p.keys, scope);
        for (const Pattern& sub : p.subs) visit_pattern(sub, scope);
        if (!p.name.empty()) bind(p.name, scope);
        return;
      case K::Class:
        if (p.value) visit_expr(*p.value, scope);
        for (const Pattern& sub : p.subs) visit_pattern(sub, scope);
        return;
      case K::Sequence:
      case K::Or:
        for (const Pattern& sub : p.subs) visit_pattern(sub, scope);
        return;
      case K::As:
        for (const Pattern& sub : p.subs) visit_pattern(sub, scope);
        bind(p.name, scope);
        return;
    }
  }

  // Attribute and subscript targets read their base; they bind nothing.
  void visit_target(const Expr& e, Scope& scope) {
    switch (e.kind) {
      case ExprKind::Name:
        bind(e.id, scope);
        return;
      case ExprKind::Starred:
      case ExprKind::Tuple:
        for (const auto& k : e.kids) visit_target(*k, scope);
        return;
      default:
        visit_expr(e, scope);
        return;
    }
  }

  void visit_delete(const Expr& e, Scope& scope) {
    switch (e.kind) {
      case ExprKind::Name:
        if (mode_ == Mode::Collect) {
          bind(e.id, scope);
        } else {
          load(e.id, scope);
        }
        return;
      case ExprKind::Tuple:
        for (const auto& k : e.kids) visit_delete(*k, scope);
        return;
      default:
        visit_expr(e, scope);
        return;
    }
  }

  void visit_expr(const Expr& e, Scope& scope) {
    switch (e.kind) {
      case ExprKind::Name:
        load(e.id, scope);
        return;
      case ExprKind::NamedExpr:
        visit_expr(*e.kids[1], scope);
        bind_walrus(e.kids[0]->id, scope);
        return;
      case ExprKind::Lambda: {
        visit_params(e.params, scope);
        if (mode_ == Mode::Collect) return;
        Scope& fn = open_function_scope(e.params, scope);
        deferred_.push_back(Deferred{&fn, nullptr, e.kids[0].get()});
        return;
      }
      case ExprKind::Comp:
        visit_comprehension(e, scope);
        return;
      default:
        visit_all(e.kids, scope);
        return;
    }
  }

  void visit_comprehension(const Expr& e, Scope& scope) {
    if (e.generators.empty()) return;
    visit_expr(*e.generators.front().iter, scope);
    if (mode_ == Mode::Collect) {
      // Only walrus targets escape a comprehension.
      ++comp_depth_;
      for (std::size_t i = 0; i < e.generators.size(); ++i) {
        const Comprehension& g = e.generators[i];
        if (i > 0) visit_expr(*g.iter, scope);
        visit_all(g.ifs, scope);
      }
      visit_all(e.kids, scope);
      --comp_depth_;
      return;
    }
    Scope& comp = new_scope(ScopeKind::Comprehension, &scope);
    for (const Comprehension& g : e.generators) collect_target(*g.target, comp);
    for (std::size_t i = 0; i < e.generators.size(); ++i) {
      const Comprehension& g = e.generators[i];
      if (i > 0) visit_expr(*g.iter, comp);
      visit_target(*g.target, comp);
      visit_all(g.ifs, comp);
    }
    visit_all(e.kids, comp);
  }

  static void collect_target(const Expr& e, Scope& scope) {
    if (e.kind == ExprKind::Name) {
      scope.locals.insert(e.id);
    } else if (e.kind == ExprKind::Starred || e.kind == ExprKind::Tuple) {
      for (const auto& k : e.kids) collect_target(*k, scope);
    }
  }

  std::deque<Scope> scopes_;
  std::vector<Deferred> deferred_;
  std::vector<NameEvent> events_;
  std::vector<std::string> imports_;
  Mode mode_ = Mode::Resolve;
  int comp_depth_ = 0;
};

inline StatementEvents extract_name_events(const TopLevel& top) {
  return NameAnalyzer().analyze(top.stmts);
}

}  // namespace resplit::py
