#include "senstrace/parser.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "senstrace/errors.hpp"
#include "senstrace/real_text.hpp"

namespace senstrace {

namespace {

struct Token {
  enum class Kind { LParen, RParen, Number, Ident, End };
  Kind kind;
  SourceSpan span;
  std::string text;
  double number = 0;
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == '?' || c == '!';
}

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_trivia();
    std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      return Token{Token::Kind::End, {start, start}, ""};
    }
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      return Token{Token::Kind::LParen, {start, pos_}, "("};
    }
    if (c == ')') {
      ++pos_;
      return Token{Token::Kind::RParen, {start, pos_}, ")"};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return lex_number(start);
    }
    if (c == '-' || c == '+') {
      bool digit_follows =
          pos_ + 1 < text_.size() &&
          (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
           text_[pos_ + 1] == '.');
      if (digit_follows) {
        return lex_number(start);
      }
      if (c == '+') { // the addition operator
        ++pos_;
        return Token{Token::Kind::Ident, {start, pos_}, "+"};
      }
      throw ParseError({start, start + 1}, "number", "sign without digits");
    }
    if (is_ident_start(c)) {
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        ++pos_;
      }
      return Token{Token::Kind::Ident,
                   {start, pos_},
                   std::string(text_.substr(start, pos_ - start))};
    }
    throw ParseError({start, start + 1}, "'(' , ')' , number or identifier",
                     "unexpected character '" + std::string(1, c) + "'");
  }

private:
  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          ++pos_;
        }
      } else {
        break;
      }
    }
  }

  Token lex_number(std::size_t start) {
    // Sign, digits, optional fraction and exponent.
    std::size_t p = pos_;
    if (text_[p] == '-' || text_[p] == '+') {
      ++p;
    }
    std::size_t digits_from = p;
    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
      ++p;
    }
    if (p == digits_from) {
      throw ParseError({start, p}, "number", "sign without digits");
    }
    if (p < text_.size() && text_[p] == '.') {
      ++p;
      while (p < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[p]))) {
        ++p;
      }
    }
    if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
      std::size_t mark = p;
      ++p;
      if (p < text_.size() && (text_[p] == '-' || text_[p] == '+')) {
        ++p;
      }
      std::size_t exp_from = p;
      while (p < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[p]))) {
        ++p;
      }
      if (p == exp_from) {
        p = mark; // dangling 'e' belongs to the next token
      }
    }
    std::string_view lexeme = text_.substr(start, p - start);
    double out = 0;
    const char *first = lexeme.data();
    const char *last = lexeme.data() + lexeme.size();
    if (first < last && *first == '+') {
      ++first; // from_chars rejects a leading plus
    }
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) {
      throw ParseError({start, p}, "number",
                       "malformed numeric literal '" + std::string(lexeme) +
                           "'");
    }
    pos_ = p;
    return Token{Token::Kind::Number, {start, p}, std::string(lexeme), out};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  ExprPtr parse() {
    ExprPtr e = expression();
    if (current_.kind != Token::Kind::End) {
      throw ParseError(current_.span, "end of input",
                       "trailing content after program");
    }
    return e;
  }

private:
  static constexpr std::size_t kMaxNesting = 10000;

  void advance() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string &expected,
                         const std::string &message) {
    throw ParseError(current_.span, expected, message);
  }

  ExprPtr expression() {
    if (++depth_ > kMaxNesting) {
      fail("shallower nesting", "program nested deeper than " +
                                    std::to_string(kMaxNesting) + " forms");
    }
    ExprPtr out = expression_inner();
    --depth_;
    return out;
  }

  ExprPtr expression_inner() {
    switch (current_.kind) {
    case Token::Kind::Number: {
      double v = current_.number;
      advance();
      return expr::real(v);
    }
    case Token::Kind::Ident: {
      std::string name = current_.text;
      advance();
      return expr::var(std::move(name));
    }
    case Token::Kind::LParen:
      return form();
    case Token::Kind::RParen:
      fail("expression", "unexpected ')'");
    case Token::Kind::End:
      fail("expression", "unexpected end of input");
    }
    fail("expression", "unrecognized token");
  }

  ExprPtr form() {
    advance(); // consume '('
    if (current_.kind != Token::Kind::Ident) {
      fail("operator (one of +, scalel, scaler, if0, pair, proj, lam, app, "
           "ref, read, write)",
           "form must start with an operator");
    }
    std::string head = current_.text;
    SourceSpan head_span = current_.span;
    advance();

    ExprPtr out;
    if (head == "+") {
      ExprPtr a = expression();
      ExprPtr b = expression();
      out = expr::plus(a, b);
    } else if (head == "scalel") {
      ExprPtr a = expression();
      ExprPtr b = expression();
      out = expr::scale_l(a, b);
    } else if (head == "scaler") {
      ExprPtr a = expression();
      ExprPtr b = expression();
      out = expr::scale_r(a, b);
    } else if (head == "if0") {
      ExprPtr g = expression();
      ExprPtr t = expression();
      ExprPtr e = expression();
      out = expr::if0(g, t, e);
    } else if (head == "pair") {
      ExprPtr a = expression();
      ExprPtr b = expression();
      out = expr::pair(a, b);
    } else if (head == "proj") {
      if (current_.kind != Token::Kind::Number ||
          (current_.number != 1.0 && current_.number != 2.0)) {
        fail("1 or 2", "projection index must be 1 or 2");
      }
      int index = static_cast<int>(current_.number);
      advance();
      out = expr::proj(index, expression());
    } else if (head == "lam") {
      if (current_.kind != Token::Kind::Ident) {
        fail("parameter name", "lam expects an identifier");
      }
      std::string param = current_.text;
      advance();
      out = expr::lam(std::move(param), expression());
    } else if (head == "app") {
      ExprPtr f = expression();
      ExprPtr a = expression();
      out = expr::app(f, a);
    } else if (head == "ref") {
      out = expr::ref(expression());
    } else if (head == "read") {
      out = expr::read(expression());
    } else if (head == "write") {
      ExprPtr t = expression();
      ExprPtr v = expression();
      out = expr::write(t, v);
    } else {
      throw ParseError(head_span,
                       "one of +, scalel, scaler, if0, pair, proj, lam, app, "
                       "ref, read, write",
                       "unknown operator '" + head + "'");
    }

    if (current_.kind != Token::Kind::RParen) {
      fail("')'", "unterminated form");
    }
    advance();
    return out;
  }

  Lexer lexer_;
  Token current_{Token::Kind::End, {0, 0}, ""};
  std::size_t depth_ = 0;
};

void print_into(const Expr &e, std::string &out) {
  std::visit(
      [&out](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarExpr>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, RealExpr>) {
          out += format_real(n.value);
        } else if constexpr (std::is_same_v<T, BinOpExpr>) {
          out += n.op == BinOpKind::Plus     ? "(+ "
                 : n.op == BinOpKind::TimesL ? "(scalel "
                                             : "(scaler ";
          print_into(*n.lhs, out);
          out += ' ';
          print_into(*n.rhs, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, If0Expr>) {
          out += "(if0 ";
          print_into(*n.guard, out);
          out += ' ';
          print_into(*n.then_branch, out);
          out += ' ';
          print_into(*n.else_branch, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PairExpr>) {
          out += "(pair ";
          print_into(*n.first, out);
          out += ' ';
          print_into(*n.second, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ProjExpr>) {
          out += "(proj ";
          out += std::to_string(n.index);
          out += ' ';
          print_into(*n.inner, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, LamExpr>) {
          out += "(lam ";
          out += n.param;
          out += ' ';
          print_into(*n.body, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, AppExpr>) {
          out += "(app ";
          print_into(*n.fn, out);
          out += ' ';
          print_into(*n.arg, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, RefExpr>) {
          out += "(ref ";
          print_into(*n.inner, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ReadExpr>) {
          out += "(read ";
          print_into(*n.inner, out);
          out += ')';
        } else {
          static_assert(std::is_same_v<T, WriteExpr>);
          out += "(write ";
          print_into(*n.target, out);
          out += ' ';
          print_into(*n.value, out);
          out += ')';
        }
      },
      e.node);
}

} // namespace

ExprPtr parse_program(std::string_view text) { return Parser(text).parse(); }

std::string print_program(const ExprPtr &e) {
  std::string out;
  print_into(*e, out);
  return out;
}

} // namespace senstrace
