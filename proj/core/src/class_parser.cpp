#include "volcone/class_parser.hpp"

#include <cctype>
#include <string>

#include "volcone/error.hpp"

namespace volcone {

namespace {

struct Cursor {
  std::string text;  // whitespace removed
  std::vector<std::size_t> origin;  // original offset of each kept character
  std::size_t pos = 0;
  std::size_t original_size = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  std::size_t where() const { return done() ? original_size : origin[pos]; }
};

Cursor make_cursor(std::string_view expr) {
  Cursor c;
  c.original_size = expr.size();
  for (std::size_t i = 0; i < expr.size(); ++i) {
    if (std::isspace(static_cast<unsigned char>(expr[i]))) continue;
    c.text.push_back(expr[i]);
    c.origin.push_back(i);
  }
  return c;
}

bool is_digit(char ch) { return ch >= '0' && ch <= '9'; }

// digits [. digits] [/ digits], with an optional trailing '*'.
std::optional<Rational> read_coefficient(Cursor& c) {
  std::size_t start = c.pos;
  while (!c.done() && is_digit(c.peek())) ++c.pos;
  if (!c.done() && c.peek() == '.') {
    ++c.pos;
    while (!c.done() && is_digit(c.peek())) ++c.pos;
  }
  if (c.pos == start) return std::nullopt;
  if (!c.done() && c.peek() == '/') {
    ++c.pos;
    std::size_t den_start = c.pos;
    while (!c.done() && is_digit(c.peek())) ++c.pos;
    if (c.pos == den_start) throw ParseError("expected denominator after '/'", c.where());
  }
  std::size_t at = c.origin[start];
  Rational value;
  try {
    value = parse_rational(std::string_view(c.text).substr(start, c.pos - start));
  } catch (const ParseError& e) {
    throw ParseError(e.what(), at);
  }
  if (!c.done() && c.peek() == '*') ++c.pos;
  return value;
}

std::optional<std::size_t> read_label(Cursor& c, const SurfaceGeometry& g) {
  std::size_t best = g.rank();
  std::size_t best_len = 0;
  std::string_view rest = std::string_view(c.text).substr(c.pos);
  for (std::size_t i = 0; i < g.rank(); ++i) {
    const std::string& label = g.basis[i];
    if (label.size() > best_len && rest.starts_with(label)) {
      best = i;
      best_len = label.size();
    }
  }
  if (best == g.rank()) return std::nullopt;
  c.pos += best_len;
  return best;
}

}  // namespace

DivisorClass parse_class(std::string_view expr, const SurfaceGeometry& geometry) {
  Cursor c = make_cursor(expr);
  if (c.text.empty()) throw ParseError("empty class expression", 0);

  RationalVector coords(geometry.rank(), Rational(0));
  bool first = true;
  while (!c.done()) {
    Rational sign = 1;
    if (c.peek() == '+' || c.peek() == '-') {
      if (c.peek() == '-') sign = -1;
      ++c.pos;
    } else if (!first) {
      throw ParseError("expected '+' or '-'", c.where());
    }
    first = false;

    std::size_t term_at = c.where();
    std::optional<Rational> coefficient = read_coefficient(c);
    std::optional<std::size_t> label = read_label(c, geometry);
    if (!label) {
      if (!c.done() && (std::isalpha(static_cast<unsigned char>(c.peek())) || c.peek() == '_')) {
        std::size_t at = c.where();
        std::size_t end = c.pos;
        while (end < c.text.size() &&
               (std::isalnum(static_cast<unsigned char>(c.text[end])) || c.text[end] == '_')) {
          ++end;
        }
        throw ParseError("unknown label '" + c.text.substr(c.pos, end - c.pos) +
                             "' for geometry '" + geometry.name + "'",
                         at);
      }
      if (!coefficient) throw ParseError("expected a coefficient or basis label", c.where());
      if (geometry.rank() != 1) {
        if (*coefficient == 0) continue;
        throw ParseError("bare number needs a basis label in rank " +
                             std::to_string(geometry.rank()),
                         term_at);
      }
      label = 0;
    }
    coords[*label] += sign * coefficient.value_or(Rational(1));
  }
  return geometry.make_class(std::move(coords));
}

RationalVector parse_coords(std::string_view text) {
  RationalVector out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view piece =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    try {
      out.push_back(parse_rational(piece));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), start);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace volcone
