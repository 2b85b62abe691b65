/*
 * Copyright (c) 2026, The fov authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cctype>
#include <sstream>

#include "fov/model.hpp"

namespace fov {

namespace {

constexpr std::string_view kStateNames[] = {"Init",    "Ready",   "Active",
                                            "Passive", "Failure", "NoSignal"};

}  // namespace

std::string_view to_string(MachineState s) {
  return kStateNames[static_cast<int>(s)];
}

std::string_view observed_name(Observed v) { return kStateNames[v]; }

std::optional<Observed> parse_observed(std::string_view name) {
  for (int i = 0; i < kObservedValues; ++i)
    if (kStateNames[i] == name) return static_cast<Observed>(i);
  return std::nullopt;
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

bool compare(CmpOp op, int lhs, int rhs) {
  switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
  }
  return false;
}

Expr Expr::unary(Op op, Expr a) {
  Expr e{op};
  e.args.push_back(std::move(a));
  return e;
}

Expr Expr::binary(Op op, Expr a, Expr b) {
  Expr e{op};
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

bool Expr::is_atom() const {
  switch (op) {
    case Op::True:
    case Op::False:
    case Op::StateIn:
    case Op::FailureActive:
    case Op::Debounce:
    case Op::Signal:
    case Op::ModeFlag:
      return true;
    default:
      return false;
  }
}

bool Expr::is_temporal() const {
  switch (op) {
    case Op::Next:
    case Op::Globally:
    case Op::Finally:
    case Op::Until:
    case Op::BoundedGlobally:
    case Op::BoundedFinally:
    case Op::Once:
      return true;
    default:
      return false;
  }
}

// --------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Bang,
  Amp,
  Pipe,
  Arrow,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(std::string_view s, int first_line) {
  std::vector<Token> out;
  int line = first_line, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t, int c) {
    out.push_back(Token{k, std::move(t), line, c});
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    int start_col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      push(Tok::Ident, std::string(s.substr(i, j - i)), start_col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::Number, std::string(s.substr(i, j - i)), start_col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
    Tok k;
    int len = 1;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case '&': k = Tok::Amp; break;
      case '|': k = Tok::Pipe; break;
      case '+': k = Tok::Plus; break;
      case '=': k = Tok::Eq; break;
      case '!':
        if (two('=')) k = Tok::Ne, len = 2;
        else k = Tok::Bang;
        break;
      case '-':
        if (two('>')) k = Tok::Arrow, len = 2;
        else k = Tok::Minus;
        break;
      case '<':
        if (two('=')) k = Tok::Le, len = 2;
        else k = Tok::Lt;
        break;
      case '>':
        if (two('=')) k = Tok::Ge, len = 2;
        else k = Tok::Gt;
        break;
      default:
        throw ModelError(std::string("unexpected character '") + c + "'", line,
                         col);
    }
    push(k, std::string(s.substr(i, len)), start_col);
    i += len;
    col += len;
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

using Op = Expr::Op;

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx)
      : toks_(lex(text, ctx.line)), ctx_(ctx) {}

  Expr parse() {
    Expr e = implies();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool at_ident(std::string_view word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string where = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ModelError("syntax error: " + msg + " at " + where, t.line, t.column);
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }

  Expr implies() {
    Expr lhs = xor_();
    if (accept(Tok::Arrow)) return Expr::binary(Op::Implies, std::move(lhs), implies());
    return lhs;
  }
  Expr xor_() {
    Expr lhs = or_();
    while (at_ident("xor")) {
      take();
      lhs = Expr::binary(Op::Xor, std::move(lhs), or_());
    }
    return lhs;
  }
  Expr or_() {
    Expr lhs = and_();
    while (accept(Tok::Pipe)) lhs = Expr::binary(Op::Or, std::move(lhs), and_());
    return lhs;
  }
  Expr and_() {
    Expr lhs = until();
    while (accept(Tok::Amp)) lhs = Expr::binary(Op::And, std::move(lhs), until());
    return lhs;
  }
  Expr until() {
    Expr lhs = unary();
    if (at_ident("U")) {
      temporal_allowed();
      take();
      return Expr::binary(Op::Until, std::move(lhs), until());
    }
    return lhs;
  }

  void temporal_allowed() const {
    if (!ctx_.allow_temporal) fail("temporal operator not allowed here");
  }

  Expr unary() {
    if (accept(Tok::Bang)) return Expr::unary(Op::Not, unary());
    if (peek().kind == Tok::Ident) {
      const std::string& w = peek().text;
      if (w == "X" || w == "O") {
        temporal_allowed();
        take();
        return Expr::unary(w == "X" ? Op::Next : Op::Once, unary());
      }
      if (w == "G" || w == "F") {
        temporal_allowed();
        bool glob = w == "G";
        take();
        if (accept(Tok::LBracket)) {
          const Token& at = peek();
          int lo = bound();
          expect(Tok::Comma, "','");
          int hi = bound();
          expect(Tok::RBracket, "']'");
          if (lo < 0 || hi < lo)
            throw ModelError("invalid bound [" + std::to_string(lo) + "," +
                                 std::to_string(hi) + "]",
                             at.line, at.column);
          Expr e = Expr::unary(glob ? Op::BoundedGlobally : Op::BoundedFinally,
                               unary());
          e.lo = lo;
          e.hi = hi;
          return e;
        }
        return Expr::unary(glob ? Op::Globally : Op::Finally, unary());
      }
    }
    return primary();
  }

  int bound_term() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      take();
      return std::stoi(t.text);
    }
    if (t.kind == Tok::Ident && ctx_.model) {
      const TimingConfig& tc = ctx_.model->timing;
      if (t.text == "FTTI") return take(), tc.ftti_cycles();
      if (t.text == "WINDOW") return take(), tc.window;
      if (t.text == "DEBOUNCE") return take(), tc.debounce;
    }
    fail("expected bound");
  }

  int bound() {
    int v = bound_term();
    for (;;) {
      if (accept(Tok::Plus)) v += bound_term();
      else if (accept(Tok::Minus)) v -= bound_term();
      else return v;
    }
  }

  std::uint8_t state_name() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected state name");
    auto v = parse_observed(t.text);
    if (!v) fail("unknown state");
    take();
    return static_cast<std::uint8_t>(1u << *v);
  }

  Expr primary() {
    if (accept(Tok::LParen)) {
      Expr e = implies();
      expect(Tok::RParen, "')'");
      return e;
    }
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected expression");
    if (t.text == "true" || t.text == "TRUE") return take(), Expr::constant(true);
    if (t.text == "false" || t.text == "FALSE") return take(), Expr::constant(false);
    if (!ctx_.model) fail("identifier without model");
    const SystemModel& m = *ctx_.model;
    Token id = take();

    if (accept(Tok::Dot)) {
      int f = m.failure_index(id.text);
      if (f < 0) throw ModelError("unknown failure '" + id.text + "'", id.line, id.column);
      if (!at_ident("t_debounce")) fail("expected t_debounce");
      take();
      Expr e{Op::Debounce};
      e.ref = f;
      switch (take().kind) {
        case Tok::Eq: e.cmp = CmpOp::Eq; break;
        case Tok::Ne: e.cmp = CmpOp::Ne; break;
        case Tok::Lt: e.cmp = CmpOp::Lt; break;
        case Tok::Le: e.cmp = CmpOp::Le; break;
        case Tok::Gt: e.cmp = CmpOp::Gt; break;
        case Tok::Ge: e.cmp = CmpOp::Ge; break;
        default: --pos_; fail("expected comparison");
      }
      e.value = bound();
      return e;
    }

    bool eq = peek().kind == Tok::Eq, ne = peek().kind == Tok::Ne;
    bool in = at_ident("in");
    if (eq || ne || in) {
      int mi = m.machine_index(id.text);
      if (mi < 0)
        throw ModelError("unknown identifier '" + id.text + "'", id.line, id.column);
      take();
      Expr e{Op::StateIn};
      e.ref = mi;
      if (in) {
        expect(Tok::LBrace, "'{'");
        if (peek().kind != Tok::RBrace) {
          e.mask |= state_name();
          while (accept(Tok::Comma)) e.mask |= state_name();
        }
        expect(Tok::RBrace, "'}'");
      } else {
        e.mask = state_name();
        if (ne) e.mask = static_cast<std::uint8_t>(~e.mask & 0x3f);
      }
      return e;
    }

    if (ctx_.allow_modes) {
      if (int i = m.mode_index(id.text); i >= 0) {
        Expr e{Op::ModeFlag};
        e.ref = i;
        return e;
      }
    }
    if (int i = m.failure_index(id.text); i >= 0) {
      Expr e{Op::FailureActive};
      e.ref = i;
      return e;
    }
    if (int i = m.signal_index(id.text); i >= 0) {
      Expr e{Op::Signal};
      e.ref = i;
      return e;
    }
    throw ModelError("unknown identifier '" + id.text + "'", id.line, id.column);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseContext& ctx_;
};

void print_into(std::ostringstream& os, const Expr& e, const SystemModel& m) {
  auto sub = [&](const Expr& x) {
    if (x.is_atom()) {
      print_into(os, x, m);
    } else {
      os << '(';
      print_into(os, x, m);
      os << ')';
    }
  };
  auto bin = [&](const char* op) {
    sub(e.args[0]);
    os << ' ' << op << ' ';
    sub(e.args[1]);
  };
  switch (e.op) {
    case Op::True: os << "true"; break;
    case Op::False: os << "false"; break;
    case Op::StateIn: {
      os << m.machines[e.ref].name;
      int bits = __builtin_popcount(e.mask);
      if (bits == 1) {
        os << " = " << observed_name(static_cast<Observed>(__builtin_ctz(e.mask)));
      } else {
        os << " in {";
        bool first = true;
        for (int v = 0; v < kObservedValues; ++v) {
          if (!(e.mask & (1u << v))) continue;
          os << (first ? "" : ", ") << observed_name(static_cast<Observed>(v));
          first = false;
        }
        os << '}';
      }
      break;
    }
    case Op::FailureActive: os << m.failures[e.ref].name; break;
    case Op::Debounce:
      os << m.failures[e.ref].name << ".t_debounce " << to_string(e.cmp) << ' '
         << e.value;
      break;
    case Op::Signal: os << m.signals[e.ref]; break;
    case Op::ModeFlag: os << m.modes[e.ref].name; break;
    case Op::Not: os << '!'; sub(e.args[0]); break;
    case Op::And: bin("&"); break;
    case Op::Or: bin("|"); break;
    case Op::Implies: bin("->"); break;
    case Op::Xor: bin("xor"); break;
    case Op::Until: bin("U"); break;
    case Op::Next: os << "X "; sub(e.args[0]); break;
    case Op::Once: os << "O "; sub(e.args[0]); break;
    case Op::Globally: os << "G "; sub(e.args[0]); break;
    case Op::Finally: os << "F "; sub(e.args[0]); break;
    case Op::BoundedGlobally:
    case Op::BoundedFinally:
      os << (e.op == Op::BoundedGlobally ? "G" : "F") << " [" << e.lo << ','
         << e.hi << "] ";
      sub(e.args[0]);
      break;
  }
}

}  // namespace

Expr parse_expr(std::string_view text, const ParseContext& ctx) {
  return Parser(text, ctx).parse();
}

std::string print_expr(const Expr& e, const SystemModel& m) {
  std::ostringstream os;
  print_into(os, e, m);
  return os.str();
}

}  // namespace fov
