#include "gramconv/bgf_text.hpp"

#include <cctype>
#include <sstream>

#include "bgf_reader.hpp"

namespace gramconv {

ParseError::ParseError(const std::string &msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line;
    int tc = col;
    if (ident_start(c)) {
      size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::string text;
      advance(1);
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < src.size()) {
          char e = src[i + 1];
          switch (e) {
            case 'n': text += '\n'; break;
            case 't': text += '\t'; break;
            case '"': text += '"'; break;
            case '\\': text += '\\'; break;
            default: throw ParseError(std::string("unknown escape \\") + e, line, col);
          }
          advance(2);
          continue;
        }
        text += d;
        advance(1);
      }
      if (!closed) throw ParseError("unterminated string", tl, tc);
      out.push_back({Tok::String, text, tl, tc});
      continue;
    }
    Tok k;
    size_t len = 1;
    switch (c) {
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ':':
        if (i + 1 < src.size() && src[i + 1] == ':') {
          k = Tok::ColonColon;
          len = 2;
        } else {
          k = Tok::Colon;
        }
        break;
      case ';': k = Tok::Semi; break;
      case '|': k = Tok::Bar; break;
      case '*': k = Tok::Star; break;
      case '+': k = Tok::Plus; break;
      case '?': k = Tok::Question; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case ',': k = Tok::Comma; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
    }
    out.push_back({k, std::string(src.substr(i, len)), tl, tc});
    advance(len);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const Token &Reader::peek(size_t ahead) const {
  size_t k = pos_ + ahead;
  return k < toks_.size() ? toks_[k] : toks_.back();
}

Token Reader::take() {
  Token t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

void Reader::fail(const std::string &msg) const {
  const Token &t = peek();
  std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(msg + " near " + near, t.line, t.column);
}

Token Reader::expect(Tok k, const char *what) {
  if (!at(k)) fail(std::string("expected ") + what);
  return take();
}

bool Reader::accept(Tok k) {
  if (!at(k)) return false;
  take();
  return true;
}

std::string Reader::identifier(const char *what) { return expect(Tok::Ident, what).text; }

bool Reader::starts_primary() const {
  Tok k = peek().kind;
  return k == Tok::Ident || k == Tok::String || k == Tok::LParen || k == Tok::LBrace;
}

Expr Reader::expression() {
  std::vector<Expr> alts{sequence()};
  while (accept(Tok::Bar)) alts.push_back(sequence());
  return alts.size() == 1 ? alts.front() : Expr::choice(std::move(alts));
}

Expr Reader::sequence() {
  if (!starts_primary()) fail("expected expression");
  std::vector<Expr> parts;
  while (starts_primary()) parts.push_back(postfix());
  return parts.size() == 1 ? parts.front() : Expr::sequence(std::move(parts));
}

Expr Reader::postfix() {
  Expr e = primary();
  for (;;) {
    if (accept(Tok::Star)) {
      e = Expr::star(e);
    } else if (accept(Tok::Plus)) {
      e = Expr::plus(e);
    } else if (accept(Tok::Question)) {
      e = Expr::optional(e);
    } else {
      return e;
    }
  }
}

Expr Reader::primary() {
  const Token &t = peek();
  switch (t.kind) {
    case Tok::String: {
      Token s = take();
      if (s.text.empty()) throw ParseError("empty terminal", s.line, s.column);
      return Expr::terminal(s.text);
    }
    case Tok::Ident: {
      if (peek(1).kind == Tok::ColonColon) {
        std::string name = take().text;
        take();
        if (!starts_primary()) fail("expected selector item");
        return Expr::selector(name, postfix());
      }
      Token id = take();
      if (id.text == "eps") return Expr::epsilon();
      if (id.text == "phi") return Expr::empty();
      return Expr::nonterminal(id.text);
    }
    case Tok::LParen: {
      take();
      Expr e = expression();
      expect(Tok::RParen, "')'");
      return e;
    }
    case Tok::LBrace: {
      take();
      if (!starts_primary()) fail("expected list item");
      Expr item = postfix();
      if (!starts_primary()) fail("expected list separator");
      Expr sep = postfix();
      expect(Tok::RBrace, "'}'");
      expect(Tok::Plus, "'+' after separated list");
      return Expr::separated_plus(item, sep);
    }
    default:
      fail("expected expression");
  }
}

Production Reader::production() {
  Production p;
  if (accept(Tok::LBracket)) {
    p.label = identifier("label");
    expect(Tok::RBracket, "']'");
  }
  p.lhs = identifier("nonterminal");
  expect(Tok::Colon, "':'");
  p.rhs = expression();
  expect(Tok::Semi, "';'");
  return p;
}

Production Reader::production_term() {
  Token head = expect(Tok::Ident, "production p(...)");
  if (head.text != "p") throw ParseError("expected production p(...)", head.line, head.column);
  expect(Tok::LParen, "'('");
  Production p;
  if (accept(Tok::LBracket)) {
    p.label = identifier("label");
    expect(Tok::RBracket, "']'");
    expect(Tok::Comma, "','");
  }
  p.lhs = identifier("nonterminal");
  expect(Tok::Comma, "','");
  p.rhs = expression();
  expect(Tok::RParen, "')'");
  return p;
}

}  // namespace detail

Grammar parse_bgf(std::string_view text) {
  detail::Reader r(text);
  Grammar g;
  using detail::Tok;
  if (r.peek().kind == Tok::Ident && r.peek().text == "roots" && r.peek(1).kind == Tok::Colon) {
    r.take();
    r.take();
    while (r.at(Tok::Ident)) g.roots.push_back(r.take().text);
    r.expect(Tok::Semi, "';' after roots");
  }
  std::set<std::pair<std::string, std::string>> labels;
  while (!r.at_end()) {
    int line = r.peek().line;
    int col = r.peek().column;
    Production p = r.production();
    if (!p.label.empty() && !labels.emplace(p.lhs, p.label).second)
      throw ParseError("duplicate label [" + p.label + "] for " + p.lhs, line, col);
    g.productions.push_back(std::move(p));
  }
  return g;
}

Expr parse_rhs(std::string_view text) {
  detail::Reader r(text);
  Expr e = r.expression();
  if (!r.at_end()) r.fail("trailing input");
  return e;
}

std::string quote_terminal(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

namespace {

// Printing context, from loosest to tightest binding.
enum Ctx { Top, Alt, Elem, Item, Operand };

std::string fmt(const Expr &e, Ctx ctx) {
  auto wrap = [](bool paren, std::string s) { return paren ? "(" + s + ")" : s; };
  switch (e.kind()) {
    case Kind::Epsilon: return "eps";
    case Kind::Empty: return "phi";
    case Kind::Terminal: return quote_terminal(e.text());
    case Kind::Nonterminal: return e.text();
    case Kind::Choice: {
      std::string s;
      for (size_t i = 0; i < e.children().size(); ++i)
        s += (i ? " | " : "") + fmt(e.children()[i], Alt);
      return wrap(ctx >= Alt, s);
    }
    case Kind::Sequence: {
      std::string s;
      for (size_t i = 0; i < e.children().size(); ++i)
        s += (i ? " " : "") + fmt(e.children()[i], Elem);
      return wrap(ctx >= Elem, s);
    }
    case Kind::Star: return fmt(e.inner(), Operand) + "*";
    case Kind::Plus: return fmt(e.inner(), Operand) + "+";
    case Kind::Optional: return fmt(e.inner(), Operand) + "?";
    case Kind::Selector: return wrap(ctx == Operand, e.text() + "::" + fmt(e.inner(), Item));
    case Kind::SeparatedPlus:
      return "{" + fmt(e.children()[0], Operand) + " " + fmt(e.children()[1], Operand) + "}+";
  }
  return "?";
}

}  // namespace

std::string format_rhs(const Expr &e) { return fmt(e, Top); }

std::string format_production(const Production &p) {
  std::string s = p.label.empty() ? "" : "[" + p.label + "] ";
  return s + p.lhs + " : " + format_rhs(p.rhs) + " ;";
}

std::string serialize_bgf(const Grammar &g) {
  std::ostringstream os;
  os << "roots:";
  for (const auto &r : g.roots) os << ' ' << r;
  os << " ;\n";
  for (const auto &p : g.productions) os << format_production(p) << '\n';
  return os.str();
}

}  // namespace gramconv
