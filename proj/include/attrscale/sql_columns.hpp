// Copyright 2026 The attrscale Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Column-reference extraction for a small SQL subset:
//
//   SELECT [DISTINCT|ALL] items
//   [FROM table [[AS] alias] {, table | [kind] JOIN table [ON expr | USING (...)]}]
//   [WHERE expr] [GROUP BY exprs] [HAVING expr]
//   [ORDER BY expr [ASC|DESC] [NULLS FIRST|LAST], ...]
//   [LIMIT expr [OFFSET expr]] [;]
//
// Subqueries, CTEs, set operators and window functions are rejected as
// unsupported. The parser only has to be precise enough to know which
// identifiers are column references; it does not build an AST.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "attrscale/catalog.hpp"
#include "attrscale/errors.hpp"

namespace attrscale {
namespace sql {

enum class TokenKind {
  identifier,
  quoted_identifier,
  number,
  string,
  parameter,
  symbol,
  end
};

struct Token {
  TokenKind kind;
  std::string text;  // unquoted body for quoted identifiers
  std::size_t offset;
};

namespace detail {

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
inline bool digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

[[noreturn]] inline void parse_error(std::size_t at, const std::string& msg) {
  throw SqlError(SqlError::Kind::parse, at, msg);
}

}  // namespace detail

inline std::vector<Token> tokenize(std::string_view s) {
  using namespace detail;
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = s.size();

  // Reads a delimited body where a doubled closer escapes itself.
  auto delimited = [&](char close, const char* what) {
    const std::size_t start = i++;
    std::string body;
    while (true) {
      if (i >= n) parse_error(start, std::string("unterminated ") + what);
      if (s[i] == close) {
        if (i + 1 < n && s[i + 1] == close && close != ']') {
          body += close;
          i += 2;
          continue;
        }
        ++i;
        break;
      }
      body += s[i++];
    }
    return body;
  };

  while (i < n) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && s[i + 1] == '-') {
      while (i < n && s[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '*') {
      const std::size_t start = i;
      auto close = s.find("*/", i + 2);
      if (close == std::string_view::npos) {
        parse_error(start, "unterminated comment");
      }
      i = close + 2;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < n && ident_char(s[i])) ++i;
      out.push_back({TokenKind::identifier, std::string(s.substr(start, i - start)),
                     start});
    } else if (c == '"') {
      out.push_back({TokenKind::quoted_identifier, delimited('"', "identifier"),
                     start});
    } else if (c == '`') {
      out.push_back({TokenKind::quoted_identifier, delimited('`', "identifier"),
                     start});
    } else if (c == '[') {
      out.push_back({TokenKind::quoted_identifier, delimited(']', "identifier"),
                     start});
    } else if (c == '\'') {
      out.push_back({TokenKind::string, delimited('\'', "string literal"),
                     start});
    } else if (digit(c) || (c == '.' && i + 1 < n && digit(s[i + 1]))) {
      while (i < n && digit(s[i])) ++i;
      if (i < n && s[i] == '.') {
        ++i;
        while (i < n && digit(s[i])) ++i;
      }
      if (i < n && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < n && digit(s[j])) {
          i = j;
          while (i < n && digit(s[i])) ++i;
        }
      }
      if (i < n && ident_start(s[i])) {
        parse_error(i, "malformed number");
      }
      out.push_back({TokenKind::number, std::string(s.substr(start, i - start)),
                     start});
    } else if (c == '?') {
      ++i;
      out.push_back({TokenKind::parameter, "?", start});
    } else if ((c == ':' || c == '@' || c == '$') && i + 1 < n &&
               (ident_char(s[i + 1]))) {
      ++i;
      while (i < n && ident_char(s[i])) ++i;
      out.push_back({TokenKind::parameter,
                     std::string(s.substr(start, i - start)), start});
    } else {
      static constexpr std::array<std::string_view, 5> two = {"<=", ">=", "<>",
                                                               "!=", "||"};
      bool matched = false;
      for (auto op : two) {
        if (s.substr(i, 2) == op) {
          out.push_back({TokenKind::symbol, std::string(op), start});
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      constexpr std::string_view one = "(),.;+-*/%=<>";
      if (one.find(c) == std::string_view::npos) {
        parse_error(start, std::string("unexpected character '") + c + "'");
      }
      out.push_back({TokenKind::symbol, std::string(1, c), start});
      ++i;
    }
  }
  out.push_back({TokenKind::end, "", n});
  return out;
}

enum class Clause { select, from, join, where, group_by, having, order_by, limit };

struct ColumnRef {
  std::string qualifier;  // folded; empty when unqualified
  std::string column;     // folded
  std::size_t offset;
  Clause clause;
};

struct TableRef {
  std::string name;   // folded, last dotted part
  std::string alias;  // folded; empty when absent
};

struct ParsedSelect {
  std::vector<ColumnRef> columns;
  std::vector<TableRef> tables;
  std::unordered_set<std::string> select_aliases;  // folded
  std::vector<std::size_t> wildcards;               // byte offsets
};

class Parser {
 public:
  explicit Parser(std::string_view sql) : tokens_(tokenize(sql)) {}

  ParsedSelect parse() {
    const Token& first = peek();
    if (keyword(first, "with")) unsupported(first, "common table expressions");
    if (!keyword(first, "select")) {
      if (first.kind == TokenKind::identifier) {
        unsupported(first, "only SELECT statements are supported");
      }
      fail(first, "expected SELECT");
    }
    advance();
    if (!accept_kw("distinct")) accept_kw("all");

    clause_ = Clause::select;
    select_item();
    while (accept_sym(",")) select_item();

    if (accept_kw("from")) {
      clause_ = Clause::from;
      from_list();
    }
    if (accept_kw("where")) {
      clause_ = Clause::where;
      expr();
    }
    if (accept_kw("group")) {
      expect_kw("by");
      clause_ = Clause::group_by;
      expr();
      while (accept_sym(",")) expr();
    }
    if (accept_kw("having")) {
      clause_ = Clause::having;
      expr();
    }
    if (accept_kw("order")) {
      expect_kw("by");
      clause_ = Clause::order_by;
      order_item();
      while (accept_sym(",")) order_item();
    }
    clause_ = Clause::limit;
    if (accept_kw("limit")) {
      expr();
      if (!accept_sym(",")) {
        if (accept_kw("offset")) expr();
      } else {
        expr();
      }
    } else if (accept_kw("offset")) {
      expr();
    }
    accept_sym(";");

    const Token& t = peek();
    if (keyword(t, "union") || keyword(t, "intersect") ||
        keyword(t, "except")) {
      unsupported(t, "set operators");
    }
    if (t.kind != TokenKind::end) fail(t, "unexpected '" + t.text + "'");
    return std::move(result_);
  }

 private:
  static bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
             return std::tolower(static_cast<unsigned char>(x)) ==
                    std::tolower(static_cast<unsigned char>(y));
           });
  }

  static bool keyword(const Token& t, std::string_view kw) {
    return t.kind == TokenKind::identifier && iequals(t.text, kw);
  }

  static bool reserved(const Token& t) {
    static const std::unordered_set<std::string> words = {
        "select", "from",   "where",  "group",     "by",     "having",
        "order",  "limit",  "offset", "join",      "inner",  "left",
        "right",  "full",   "outer",  "cross",     "natural", "on",
        "using",  "as",     "and",    "or",        "not",    "in",
        "is",     "null",   "like",   "ilike",     "between", "case",
        "when",   "then",   "else",   "end",       "distinct", "all",
        "union",  "intersect", "except", "asc",    "desc",   "exists",
        "true",   "false",  "with",   "cast",      "nulls",  "escape",
        "over"};
    return t.kind == TokenKind::identifier &&
           words.contains(fold_identifier(t.text));
  }

  static bool name_token(const Token& t) {
    return (t.kind == TokenKind::identifier && !reserved(t)) ||
           t.kind == TokenKind::quoted_identifier;
  }

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool sym(const Token& t, std::string_view s) const {
    return t.kind == TokenKind::symbol && t.text == s;
  }
  bool accept_sym(std::string_view s) {
    if (!sym(peek(), s)) return false;
    advance();
    return true;
  }
  void expect_sym(std::string_view s) {
    if (!accept_sym(s)) fail(peek(), "expected '" + std::string(s) + "'");
  }
  bool accept_kw(std::string_view kw) {
    if (!keyword(peek(), kw)) return false;
    advance();
    return true;
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) {
      std::string upper(kw);
      for (auto& c : upper) c = static_cast<char>(std::toupper(c));
      fail(peek(), "expected " + upper);
    }
  }

  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    detail::parse_error(at.offset, msg);
  }
  [[noreturn]] static void unsupported(const Token& at, const std::string& msg) {
    throw SqlError(SqlError::Kind::unsupported, at.offset,
                   "unsupported: " + msg);
  }

  std::string expect_name(const char* what) {
    const Token& t = peek();
    if (!name_token(t)) fail(t, std::string("expected ") + what);
    advance();
    return fold_identifier(t.text);
  }

  void optional_alias(std::string& alias) {
    if (accept_kw("as")) {
      alias = expect_name("alias");
    } else if (name_token(peek())) {
      alias = fold_identifier(advance().text);
    }
  }

  void select_item() {
    if (sym(peek(), "*")) {
      result_.wildcards.push_back(advance().offset);
      return;
    }
    if (name_token(peek()) && sym(peek(1), ".") && sym(peek(2), "*")) {
      result_.wildcards.push_back(peek().offset);
      pos_ += 3;
      return;
    }
    expr();
    std::string alias;
    optional_alias(alias);
    if (!alias.empty()) result_.select_aliases.insert(alias);
  }

  void table_ref() {
    const Token& t = peek();
    if (sym(t, "(")) {
      if (keyword(peek(1), "select")) unsupported(peek(1), "subqueries");
      fail(t, "expected table name");
    }
    std::string name = expect_name("table name");
    while (accept_sym(".")) name = expect_name("table name");
    TableRef ref{std::move(name), {}};
    optional_alias(ref.alias);
    result_.tables.push_back(std::move(ref));
  }

  bool join_ahead() const {
    const Token& t = peek();
    return keyword(t, "join") || keyword(t, "inner") || keyword(t, "left") ||
           keyword(t, "right") || keyword(t, "full") || keyword(t, "cross") ||
           keyword(t, "natural");
  }

  void from_list() {
    table_ref();
    while (true) {
      if (accept_sym(",")) {
        clause_ = Clause::from;
        table_ref();
        continue;
      }
      if (!join_ahead()) break;
      const bool natural = accept_kw("natural");
      bool cross = false;
      if (accept_kw("cross")) {
        cross = true;
      } else if (!accept_kw("inner")) {
        if (accept_kw("left") || accept_kw("right") || accept_kw("full")) {
          accept_kw("outer");
        }
      }
      expect_kw("join");
      clause_ = Clause::from;
      table_ref();
      if (cross || natural) continue;
      clause_ = Clause::join;
      if (accept_kw("on")) {
        expr();
      } else if (accept_kw("using")) {
        expect_sym("(");
        do {
          const Token& c = peek();
          std::string col = expect_name("column name");
          result_.columns.push_back({"", std::move(col), c.offset, clause_});
        } while (accept_sym(","));
        expect_sym(")");
      }
    }
  }

  void order_item() {
    expr();
    if (!accept_kw("asc")) accept_kw("desc");
    if (accept_kw("nulls")) {
      if (!accept_kw("first")) expect_kw("last");
    }
  }

  // expr := or
  void expr() { or_expr(); }

  void or_expr() {
    and_expr();
    while (accept_kw("or")) and_expr();
  }

  void and_expr() {
    not_expr();
    while (accept_kw("and")) not_expr();
  }

  void not_expr() {
    if (accept_kw("not")) {
      not_expr();
      return;
    }
    predicate();
  }

  void predicate() {
    additive();
    const Token& t = peek();
    static constexpr std::array<std::string_view, 7> comparisons = {
        "=", "<>", "!=", "<", "<=", ">", ">="};
    if (t.kind == TokenKind::symbol &&
        std::find(comparisons.begin(), comparisons.end(), t.text) !=
            comparisons.end()) {
      advance();
      additive();
      return;
    }
    if (accept_kw("is")) {
      accept_kw("not");
      if (accept_kw("distinct")) {
        expect_kw("from");
        additive();
        return;
      }
      if (!(accept_kw("null") || accept_kw("true") || accept_kw("false") ||
            accept_kw("unknown"))) {
        fail(peek(), "expected NULL, TRUE or FALSE after IS");
      }
      return;
    }
    std::size_t la = keyword(t, "not") ? 1 : 0;
    const Token& op = peek(la);
    if (keyword(op, "in")) {
      pos_ += la + 1;
      expect_sym("(");
      if (keyword(peek(), "select")) unsupported(peek(), "subqueries");
      expr();
      while (accept_sym(",")) expr();
      expect_sym(")");
    } else if (keyword(op, "between")) {
      pos_ += la + 1;
      additive();
      expect_kw("and");
      additive();
    } else if (keyword(op, "like") || keyword(op, "ilike")) {
      pos_ += la + 1;
      additive();
      if (accept_kw("escape")) additive();
    }
  }

  void additive() {
    multiplicative();
    while (accept_sym("+") || accept_sym("-") || accept_sym("||")) {
      multiplicative();
    }
  }

  void multiplicative() {
    unary();
    while (accept_sym("*") || accept_sym("/") || accept_sym("%")) unary();
  }

  void unary() {
    if (accept_sym("-") || accept_sym("+")) {
      unary();
      return;
    }
    primary();
  }

  void primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::number:
      case TokenKind::string:
      case TokenKind::parameter:
        advance();
        return;
      case TokenKind::end:
        fail(t, "unexpected end of statement");
      case TokenKind::symbol:
        if (sym(t, "(")) {
          advance();
          if (keyword(peek(), "select")) unsupported(peek(), "subqueries");
          expr();
          while (accept_sym(",")) expr();
          expect_sym(")");
          return;
        }
        fail(t, "unexpected '" + t.text + "'");
      case TokenKind::quoted_identifier:
        column_ref();
        return;
      case TokenKind::identifier:
        break;
    }

    if (accept_kw("null") || accept_kw("true") || accept_kw("false")) return;
    if (keyword(t, "exists")) unsupported(t, "subqueries");
    if (accept_kw("case")) {
      case_tail();
      return;
    }
    if (accept_kw("cast")) {
      expect_sym("(");
      expr();
      expect_kw("as");
      type_name();
      expect_sym(")");
      return;
    }
    if (reserved(t)) fail(t, "unexpected keyword '" + t.text + "'");

    // Typed literal: DATE '2020-01-01', INTERVAL '1 day', ...
    if (peek(1).kind == TokenKind::string &&
        (keyword(t, "date") || keyword(t, "time") ||
         keyword(t, "timestamp") || keyword(t, "interval"))) {
      pos_ += 2;
      return;
    }
    if (sym(peek(1), "(")) {
      function_call();
      return;
    }
    column_ref();
  }

  void case_tail() {
    if (!keyword(peek(), "when")) expr();
    if (!keyword(peek(), "when")) fail(peek(), "expected WHEN");
    while (accept_kw("when")) {
      expr();
      expect_kw("then");
      expr();
    }
    if (accept_kw("else")) expr();
    expect_kw("end");
  }

  void type_name() {
    if (!name_token(peek())) fail(peek(), "expected type name");
    while (name_token(peek())) advance();
    if (accept_sym("(")) {
      do {
        if (peek().kind != TokenKind::number) fail(peek(), "expected number");
        advance();
      } while (accept_sym(","));
      expect_sym(")");
    }
  }

  void function_call() {
    advance();  // name
    advance();  // (
    if (keyword(peek(), "select")) unsupported(peek(), "subqueries");
    if (!accept_sym(")")) {
      if (sym(peek(), "*")) {
        advance();
      } else {
        if (!accept_kw("distinct")) accept_kw("all");
        expr();
        while (accept_sym(",")) expr();
      }
      expect_sym(")");
    }
    if (keyword(peek(), "over")) unsupported(peek(), "window functions");
  }

  void column_ref() {
    const Token& first = advance();
    std::vector<std::string> parts{fold_identifier(first.text)};
    while (sym(peek(), ".")) {
      if (sym(peek(1), "*")) {
        result_.wildcards.push_back(first.offset);
        pos_ += 2;
        return;
      }
      advance();
      parts.push_back(expect_name("column name"));
    }
    ColumnRef ref{"", parts.back(), first.offset, clause_};
    if (parts.size() >= 2) ref.qualifier = parts[parts.size() - 2];
    result_.columns.push_back(std::move(ref));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Clause clause_ = Clause::select;
  ParsedSelect result_;
};

inline ParsedSelect parse_select(std::string_view sql) {
  return Parser(sql).parse();
}

}  // namespace sql

/// A reference that did not map onto the catalog.
struct UnresolvedReference {
  std::string reference;
  std::size_t offset;
  std::string reason;

  friend bool operator==(const UnresolvedReference&,
                         const UnresolvedReference&) = default;
};

struct ColumnExtraction {
  std::vector<std::size_t> attributes;  // sorted catalog indices
  std::vector<UnresolvedReference> unresolved;

  /// No catalog column referenced; such a query is dropped from analysis.
  bool empty() const noexcept { return attributes.empty(); }
};

/// Catalog attributes referenced by `sql`. Table aliases are resolved; a
/// `t.c` reference matches catalog entry `t.c` first, then `c`. Unqualified
/// names in GROUP BY / HAVING / ORDER BY that equal a select-list alias
/// refer to that alias and are skipped.
inline ColumnExtraction extract_attributes(std::string_view sql,
                                           const AttributeCatalog& catalog) {
  if (catalog.empty()) throw std::invalid_argument("empty catalog");
  if (trim(sql).empty()) {
    throw SqlError(SqlError::Kind::parse, 0, "empty statement");
  }
  const sql::ParsedSelect parsed = sql::parse_select(sql);

  std::unordered_map<std::string, std::string> table_of;
  std::vector<std::string> tables;
  for (const auto& t : parsed.tables) {
    table_of.emplace(t.name, t.name);
    if (std::find(tables.begin(), tables.end(), t.name) == tables.end()) {
      tables.push_back(t.name);
    }
  }
  for (const auto& t : parsed.tables) {
    if (!t.alias.empty()) table_of[t.alias] = t.name;
  }
  const bool qualified_catalog = catalog.qualified();

  ColumnExtraction out;
  for (const auto& ref : parsed.columns) {
    std::optional<std::size_t> hit;
    std::string reason = "not in catalog";
    if (!ref.qualifier.empty()) {
      auto it = table_of.find(ref.qualifier);
      const std::string& table =
          it == table_of.end() ? ref.qualifier : it->second;
      hit = catalog.find(table + "." + ref.column);
      if (!hit) hit = catalog.find(ref.column);
    } else {
      const bool alias_scope = ref.clause == sql::Clause::group_by ||
                               ref.clause == sql::Clause::having ||
                               ref.clause == sql::Clause::order_by;
      if (alias_scope && parsed.select_aliases.contains(ref.column)) continue;
      hit = catalog.find(ref.column);
      if (!hit && qualified_catalog) {
        std::size_t matches = 0;
        for (const auto& t : tables) {
          if (auto h = catalog.find(t + "." + ref.column)) {
            if (!hit || *hit != *h) ++matches;
            hit = h;
          }
        }
        if (matches > 1) {
          hit.reset();
          reason = "ambiguous";
        }
      }
    }
    if (hit) {
      out.attributes.push_back(*hit);
    } else {
      std::string text = ref.qualifier.empty()
                             ? ref.column
                             : ref.qualifier + "." + ref.column;
      out.unresolved.push_back({std::move(text), ref.offset, reason});
    }
  }
  for (auto offset : parsed.wildcards) {
    out.unresolved.push_back({"*", offset, "wildcard not expanded"});
  }
  std::sort(out.attributes.begin(), out.attributes.end());
  out.attributes.erase(
      std::unique(out.attributes.begin(), out.attributes.end()),
      out.attributes.end());
  std::sort(out.unresolved.begin(), out.unresolved.end(),
            [](const auto& a, const auto& b) { return a.offset < b.offset; });
  return out;
}

}  // namespace attrscale
