#include "jetflow/expr/ast.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "jetflow/errors.hpp"

namespace jetflow::expr {

namespace {

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::size_t pos;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    cur_.pos = i_;
    if (i_ >= text_.size()) {
      cur_.kind = Token::Kind::End;
      return;
    }
    char c = text_[i_];
    switch (c) {
      case '+': cur_.kind = Token::Kind::Plus; ++i_; return;
      case '-': cur_.kind = Token::Kind::Minus; ++i_; return;
      case '*': cur_.kind = Token::Kind::Star; ++i_; return;
      case '/': cur_.kind = Token::Kind::Slash; ++i_; return;
      case '^': cur_.kind = Token::Kind::Caret; ++i_; return;
      case '(': cur_.kind = Token::Kind::LParen; ++i_; return;
      case ')': cur_.kind = Token::Kind::RParen; ++i_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + i_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) throw SyntaxError("malformed number", i_);
      cur_.kind = Token::Kind::Number;
      cur_.number = v;
      i_ += static_cast<std::size_t>(end - begin);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      cur_.kind = Token::Kind::Ident;
      cur_.ident = text_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", i_);
  }

  const std::string& text_;
  std::size_t i_ = 0;
  Token cur_;
};

class Parser {
 public:
  Parser(const std::string& text, int n) : lex_(text), n_(n) {
    if (n < 1) throw DimensionError("dimension must be >= 1");
  }

  AstPtr run() {
    AstPtr e = sum();
    if (lex_.peek().kind != Token::Kind::End)
      throw SyntaxError("trailing input after expression", lex_.peek().pos);
    return e;
  }

 private:
  AstPtr sum() {
    AstPtr e = product();
    for (;;) {
      auto k = lex_.peek().kind;
      if (k != Token::Kind::Plus && k != Token::Kind::Minus) return e;
      Token t = lex_.take();
      e = binary(k == Token::Kind::Plus ? BinOp::Add : BinOp::Sub, t.pos, std::move(e),
                 product());
    }
  }

  AstPtr product() {
    AstPtr e = unary();
    for (;;) {
      auto k = lex_.peek().kind;
      if (k != Token::Kind::Star && k != Token::Kind::Slash) return e;
      Token t = lex_.take();
      e = binary(k == Token::Kind::Star ? BinOp::Mul : BinOp::Div, t.pos, std::move(e),
                 unary());
    }
  }

  AstPtr unary() {
    if (lex_.peek().kind == Token::Kind::Minus) {
      Token t = lex_.take();
      auto node = std::make_unique<AstNode>();
      node->kind = NodeKind::Negate;
      node->pos = t.pos;
      node->lhs = unary();
      return node;
    }
    return power();
  }

  // Right-associative; exponent may carry a unary minus (e.g. t^-2).
  AstPtr power() {
    AstPtr base = primary();
    if (lex_.peek().kind != Token::Kind::Caret) return base;
    Token t = lex_.take();
    return binary(BinOp::Pow, t.pos, std::move(base), unary());
  }

  AstPtr primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::Number: {
        auto node = std::make_unique<AstNode>();
        node->kind = NodeKind::Constant;
        node->pos = t.pos;
        node->constant = t.number;
        return node;
      }
      case Token::Kind::LParen: {
        AstPtr e = sum();
        expect(Token::Kind::RParen, "expected ')'");
        return e;
      }
      case Token::Kind::Ident:
        return identifier(t);
      default:
        throw SyntaxError("expected a number, variable, function or '('", t.pos);
    }
  }

  AstPtr identifier(const Token& t) {
    if (lex_.peek().kind == Token::Kind::LParen) {
      Func fn;
      if (t.ident == "sin") fn = Func::Sin;
      else if (t.ident == "cos") fn = Func::Cos;
      else if (t.ident == "tan") fn = Func::Tan;
      else if (t.ident == "exp") fn = Func::Exp;
      else if (t.ident == "log") fn = Func::Log;
      else if (t.ident == "sqrt") fn = Func::Sqrt;
      else if (t.ident == "sinh") fn = Func::Sinh;
      else if (t.ident == "cosh") fn = Func::Cosh;
      else throw SyntaxError("unknown function '" + t.ident + "'", t.pos);
      lex_.take();  // '('
      auto node = std::make_unique<AstNode>();
      node->kind = NodeKind::Call;
      node->pos = t.pos;
      node->fn = fn;
      node->lhs = sum();
      expect(Token::Kind::RParen, "expected ')' after function argument");
      return node;
    }
    auto node = std::make_unique<AstNode>();
    node->kind = NodeKind::Variable;
    node->pos = t.pos;
    node->var = variable(t);
    return node;
  }

  Var variable(const Token& t) {
    if (t.ident == "t") return {Var::Kind::T, 0};
    if ((t.ident[0] == 'x' || t.ident[0] == 'y') && t.ident.size() > 1) {
      for (std::size_t i = 1; i < t.ident.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t.ident[i])))
          throw SyntaxError("unknown identifier '" + t.ident + "'", t.pos);
      int idx = std::atoi(t.ident.c_str() + 1);
      if (idx < 1 || idx > n_)
        throw DimensionError("variable '" + t.ident + "' out of range for dimension " +
                             std::to_string(n_));
      return {t.ident[0] == 'x' ? Var::Kind::X : Var::Kind::Y, idx - 1};
    }
    throw SyntaxError("unknown identifier '" + t.ident + "'", t.pos);
  }

  AstPtr binary(BinOp op, std::size_t pos, AstPtr l, AstPtr r) {
    auto node = std::make_unique<AstNode>();
    node->kind = NodeKind::Binary;
    node->pos = pos;
    node->op = op;
    node->lhs = std::move(l);
    node->rhs = std::move(r);
    return node;
  }

  void expect(Token::Kind k, const char* msg) {
    if (lex_.peek().kind != k) throw SyntaxError(msg, lex_.peek().pos);
    lex_.take();
  }

  Lexer lex_;
  int n_;
};

const char* funcName(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Sinh: return "sinh";
    default: return "cosh";
  }
}

}  // namespace

AstPtr parse(const std::string& text, int n) { return Parser(text, n).run(); }

std::string print(const AstNode& ast) {
  std::ostringstream os;
  os.precision(17);
  switch (ast.kind) {
    case NodeKind::Constant:
      os << ast.constant;
      break;
    case NodeKind::Variable:
      switch (ast.var.kind) {
        case Var::Kind::T: os << "t"; break;
        case Var::Kind::X: os << "x" << (ast.var.index + 1); break;
        case Var::Kind::Y: os << "y" << (ast.var.index + 1); break;
      }
      break;
    case NodeKind::Binary: {
      const char* op = "+";
      if (ast.op == BinOp::Sub) op = "-";
      else if (ast.op == BinOp::Mul) op = "*";
      else if (ast.op == BinOp::Div) op = "/";
      else if (ast.op == BinOp::Pow) op = "^";
      os << "(" << print(*ast.lhs) << " " << op << " " << print(*ast.rhs) << ")";
      break;
    }
    case NodeKind::Negate:
      os << "(-" << print(*ast.lhs) << ")";
      break;
    case NodeKind::Call:
      os << funcName(ast.fn) << "(" << print(*ast.lhs) << ")";
      break;
  }
  return os.str();
}

bool structurallyEqual(const AstNode& a, const AstNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      return a.constant == b.constant;
    case NodeKind::Variable:
      return a.var == b.var;
    case NodeKind::Binary:
      return a.op == b.op && structurallyEqual(*a.lhs, *b.lhs) &&
             structurallyEqual(*a.rhs, *b.rhs);
    case NodeKind::Negate:
      return structurallyEqual(*a.lhs, *b.lhs);
    case NodeKind::Call:
      return a.fn == b.fn && structurallyEqual(*a.lhs, *b.lhs);
  }
  return false;
}

}  // namespace jetflow::expr
