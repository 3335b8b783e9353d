#include <algorithm>
#include <cctype>
#include <sstream>

#include "exrep/algebra.hpp"

namespace exrep {

std::size_t Quiver::add_vertex(const std::string& label) {
  if (vertex_index(label)) throw AlgebraError("duplicate vertex '" + label + "'");
  vertices_.push_back(label);
  return vertices_.size() - 1;
}

std::size_t Quiver::add_arrow(const std::string& name, std::size_t source, std::size_t target) {
  if (arrow_index(name)) throw AlgebraError("duplicate arrow '" + name + "'");
  if (source >= vertices_.size() || target >= vertices_.size())
    throw AlgebraError("arrow '" + name + "' has an undeclared endpoint");
  arrows_.push_back({name, source, target});
  return arrows_.size() - 1;
}

std::optional<std::size_t> Quiver::vertex_index(std::string_view label) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == label) return i;
  return std::nullopt;
}

std::optional<std::size_t> Quiver::arrow_index(std::string_view name) const {
  for (std::size_t i = 0; i < arrows_.size(); ++i)
    if (arrows_[i].name == name) return i;
  return std::nullopt;
}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> split_words(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

class RelationParser {
 public:
  RelationParser(const std::string& body, std::size_t offset, std::size_t line, const Quiver& q)
      : s_(body), offset_(offset), line_(line), quiver_(q) {}

  RelationExpr parse() {
    RelationExpr rel;
    rel.line = line_;
    skip_ws();
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      rel.terms.push_back(parse_term(sign));
      first = false;
      skip_ws();
    }
    if (rel.terms.empty()) fail("empty relation");
    return rel;
  }

 private:
  PathTerm parse_term(int sign) {
    PathTerm t;
    t.coefficient = sign;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
        ++pos_;
      try {
        t.coefficient *= parse_rational(s_.substr(start, pos_ - start));
      } catch (const LinalgError& e) {
        fail_at(start, e.what());
      }
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '*') fail("coefficient must be followed by '*<arrow>'");
      ++pos_;
      skip_ws();
    }
    while (true) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
      if (start == pos_) fail("expected an arrow name");
      std::string name = s_.substr(start, pos_ - start);
      auto idx = quiver_.arrow_index(name);
      if (!idx) fail_at(start, "unknown arrow '" + name + "'");
      if (!t.arrows.empty()) {
        const auto& prev = quiver_.arrows()[t.arrows.back()];
        if (prev.target != quiver_.arrows()[*idx].source)
          fail_at(start, "arrows '" + prev.name + "' and '" + name + "' are not composable");
      }
      t.arrows.push_back(*idx);
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        skip_ws();
        continue;
      }
      break;
    }
    return t;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }
  [[noreturn]] void fail_at(std::size_t p, const std::string& what) const {
    throw ParseError(line_, offset_ + p + 1, what);
  }

  const std::string& s_;
  std::size_t offset_;
  std::size_t line_;
  const Quiver& quiver_;
  std::size_t pos_ = 0;
};

}  // namespace

Presentation parse_algebra_file(std::string_view text) {
  Presentation p;
  p.field = FieldSpec::rationals();
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool seen_header = false, seen_vertices = false, ended = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    auto words = split_words(line);
    if (words.empty()) continue;
    if (ended) throw ParseError(lineno, words[0].column, "content after 'end'");
    const std::string& kw = words[0].text;
    auto need = [&](std::size_t n) {
      if (words.size() != n)
        throw ParseError(lineno, words[0].column,
                         "'" + kw + "' expects " + std::to_string(n - 1) + " argument(s)");
    };
    if (!seen_header && kw != "algebra")
      throw ParseError(lineno, words[0].column, "file must start with 'algebra <name>'");
    if (kw == "algebra") {
      if (seen_header) throw ParseError(lineno, words[0].column, "duplicate 'algebra' line");
      need(2);
      p.name = words[1].text;
      seen_header = true;
    } else if (kw == "field") {
      try {
        if (words.size() == 2) {
          p.field = FieldSpec::parse(words[1].text);
        } else if (words.size() == 3 && words[1].text == "F") {
          p.field = FieldSpec::parse("F" + words[2].text);
        } else {
          throw LinalgError("expected 'field Q' or 'field F <p>'");
        }
      } catch (const LinalgError& e) {
        throw ParseError(lineno, words[1 < words.size() ? 1 : 0].column, e.what());
      }
    } else if (kw == "vertices") {
      if (seen_vertices) throw ParseError(lineno, words[0].column, "duplicate 'vertices' line");
      for (std::size_t i = 1; i < words.size(); ++i) {
        if (p.quiver.vertex_index(words[i].text))
          throw ParseError(lineno, words[i].column, "duplicate vertex '" + words[i].text + "'");
        p.quiver.add_vertex(words[i].text);
      }
      seen_vertices = true;
    } else if (kw == "arrow") {
      need(4);
      const auto& name = words[1];
      if (!std::all_of(name.text.begin(), name.text.end(), is_name_char))
        throw ParseError(lineno, name.column, "invalid arrow name '" + name.text + "'");
      if (p.quiver.arrow_index(name.text))
        throw ParseError(lineno, name.column, "duplicate arrow '" + name.text + "'");
      auto src = p.quiver.vertex_index(words[2].text);
      if (!src) throw ParseError(lineno, words[2].column, "unknown vertex '" + words[2].text + "'");
      auto dst = p.quiver.vertex_index(words[3].text);
      if (!dst) throw ParseError(lineno, words[3].column, "unknown vertex '" + words[3].text + "'");
      p.quiver.add_arrow(name.text, *src, *dst);
    } else if (kw == "relation") {
      std::size_t body_start = words[0].column - 1 + kw.size();
      const std::string body = line.substr(body_start);
      RelationParser rp(body, body_start, lineno, p.quiver);
      RelationExpr rel = rp.parse();
      const auto& arrows = p.quiver.arrows();
      auto src = arrows[rel.terms[0].arrows.front()].source;
      auto dst = arrows[rel.terms[0].arrows.back()].target;
      for (const auto& t : rel.terms)
        if (arrows[t.arrows.front()].source != src || arrows[t.arrows.back()].target != dst)
          throw ParseError(lineno, words[0].column, "relation terms are not parallel paths");
      p.relations.push_back(std::move(rel));
    } else if (kw == "end") {
      need(1);
      ended = true;
    } else {
      throw ParseError(lineno, words[0].column, "unknown directive '" + kw + "'");
    }
  }
  if (!seen_header) throw ParseError(lineno == 0 ? 1 : lineno, 1, "missing 'algebra <name>' line");
  return p;
}

}  // namespace exrep
