#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mssr/error.hpp"
#include "mssr/network.hpp"

namespace mssr {

namespace {

class LineCursor {
 public:
  LineCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }
  void expect(char c, std::string_view what) {
    if (!consume(c)) fail(std::string("expected ") + std::string(what));
  }
  std::string identifier(std::string_view what) {
    skip_space();
    const auto start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    }
    if (pos_ == start) fail(std::string("expected ") + std::string(what));
    return std::string(text_.substr(start, pos_ - start));
  }
  /// Optional unsigned integer directly at the cursor (after whitespace).
  std::optional<int> integer() {
    skip_space();
    const auto start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) return std::nullopt;
    try {
      return std::stoi(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      pos_ = start;
      fail("integer out of range");
    }
  }
  /// Characters up to whitespace or any of `stops`.
  std::string token(std::string_view stops = "") {
    skip_space();
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           stops.find(text_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }
  std::size_t column() const { return pos_ + 1; }
  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, column(), message); }
  [[noreturn]] void fail_at(std::size_t column, const std::string& message) const {
    throw ParseError(line_, column, message);
  }
  void mark() { skip_space(); }
  std::size_t position() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

Rational rational_value(LineCursor& cur, const std::string& text, std::size_t column, std::string_view key) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    cur.fail_at(column, "invalid rational for " + std::string(key) + ": '" + text + "'");
  }
}

double decimal_value(LineCursor& cur, const std::string& text, std::size_t column, std::string_view key) {
  try {
    return parse_decimal(text);
  } catch (const std::invalid_argument&) {
    cur.fail_at(column, "invalid decimal for " + std::string(key) + ": '" + text + "'");
  }
}

struct SpeciesRef {
  std::string name;
  std::size_t column;
};

Complex parse_complex(LineCursor& cur, std::vector<SpeciesRef>& refs) {
  Complex complex;
  cur.mark();
  if (cur.peek() == '0') {
    const auto col = cur.column();
    auto value = cur.integer();
    if (value && *value == 0) return complex;
    cur.fail_at(col, "a bare coefficient needs a species name");
  }
  do {
    cur.mark();
    const auto col = cur.column();
    auto coefficient = cur.integer().value_or(1);
    if (coefficient <= 0) cur.fail_at(col, "stoichiometric coefficients must be positive");
    cur.mark();
    const auto name_col = cur.column();
    auto name = cur.identifier("species name");
    refs.push_back({name, name_col});
    complex.add(name, coefficient);
  } while (cur.consume('+'));
  return complex;
}

std::vector<Factor> parse_law(LineCursor& cur, const Complex& source, std::vector<SpeciesRef>& refs) {
  std::vector<Factor> factors;
  cur.mark();
  if (cur.peek() == '1') {
    cur.integer();
    return factors;
  }
  do {
    cur.mark();
    const auto kind_col = cur.column();
    const auto kind_name = cur.identifier("factor kind");
    Factor f;
    if (kind_name == "ff") f.kind = FactorKind::FallingFactorial;
    else if (kind_name == "pow") f.kind = FactorKind::Power;
    else if (kind_name == "hill") f.kind = FactorKind::Hill;
    else if (kind_name == "sqrt") f.kind = FactorKind::Sqrt;
    else if (kind_name == "log1p") f.kind = FactorKind::Log1pProduct;
    else cur.fail_at(kind_col, "unknown factor kind '" + kind_name + "'");

    cur.expect('(', "'(' after factor kind");
    cur.mark();
    auto col = cur.column();
    f.species.push_back(cur.identifier("species name"));
    refs.push_back({f.species.back(), col});
    switch (f.kind) {
      case FactorKind::FallingFactorial:
      case FactorKind::Power: {
        const int fallback = f.kind == FactorKind::FallingFactorial ? source.coefficient(f.species.front()) : 0;
        f.degree = fallback > 0 ? fallback : 1;
        if (cur.consume(',')) {
          cur.mark();
          const auto deg_col = cur.column();
          auto degree = cur.integer();
          if (!degree || *degree < 1) cur.fail_at(deg_col, "factor degree must be a positive integer");
          f.degree = *degree;
        } else if (f.kind == FactorKind::Power) {
          cur.fail("pow needs a degree");
        }
        break;
      }
      case FactorKind::Hill: {
        cur.expect(',', "',' and the hill constant");
        cur.mark();
        const auto c_col = cur.column();
        const auto text = cur.token(")");
        f.c = decimal_value(cur, text, c_col, "hill constant");
        if (!(f.c > 0.0)) cur.fail_at(c_col, "hill constant must be positive");
        break;
      }
      case FactorKind::Sqrt:
        break;
      case FactorKind::Log1pProduct:
        while (cur.consume('*')) {
          cur.mark();
          col = cur.column();
          f.species.push_back(cur.identifier("species name"));
          refs.push_back({f.species.back(), col});
        }
        break;
    }
    cur.expect(')', "')' closing the factor");
    factors.push_back(std::move(f));
  } while (cur.consume(';'));
  return factors;
}

}  // namespace

ReactionNetwork parse_network(std::string_view text) {
  std::vector<Species> species;
  std::vector<Reaction> reactions;
  std::unordered_map<std::string, std::size_t> declared;  // name -> line
  std::set<std::string> reaction_ids;

  struct PendingRefs {
    std::size_t line;
    std::vector<SpeciesRef> refs;
  };
  std::vector<PendingRefs> pending;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineCursor cur(line, line_no);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    const auto keyword = cur.identifier("'species' or 'reaction'");
    if (keyword == "species") {
      cur.mark();
      const auto name_col = cur.column();
      Species s;
      s.name = cur.identifier("species name");
      if (declared.contains(s.name)) cur.fail_at(name_col, "duplicate species '" + s.name + "'");
      bool have_alpha = false, have_z0 = false;
      while (!cur.at_end()) {
        const auto key_col = cur.column();
        const auto key = cur.identifier("key");
        cur.expect('=', "'=' after " + key);
        const auto value_col = cur.column();
        const auto value = cur.token();
        if (key == "alpha") {
          s.alpha = rational_value(cur, value, value_col, key);
          if (s.alpha < 0) cur.fail_at(value_col, "alpha must be nonnegative");
          have_alpha = true;
        } else if (key == "z0") {
          s.z0 = decimal_value(cur, value, value_col, key);
          if (s.z0 < 0) cur.fail_at(value_col, "z0 must be nonnegative");
          have_z0 = true;
        } else {
          cur.fail_at(key_col, "unknown species attribute '" + key + "'");
        }
      }
      if (!have_alpha || !have_z0) cur.fail("species needs alpha= and z0=");
      if (s.is_low() && s.z0 != static_cast<double>(static_cast<std::int64_t>(s.z0))) {
        cur.fail_at(name_col, "low-copy species '" + s.name + "' needs an integer z0");
      }
      declared.emplace(s.name, line_no);
      species.push_back(std::move(s));
    } else if (keyword == "reaction") {
      cur.mark();
      const auto id_col = cur.column();
      Reaction r;
      r.id = cur.identifier("reaction id");
      if (!reaction_ids.insert(r.id).second) cur.fail_at(id_col, "duplicate reaction id '" + r.id + "'");
      cur.expect(':', "':' after the reaction id");
      PendingRefs refs{line_no, {}};
      r.source = parse_complex(cur, refs.refs);
      if (!cur.consume("->")) cur.fail("expected '->'");
      r.target = parse_complex(cur, refs.refs);
      if (r.source == r.target) cur.fail_at(id_col, "reaction '" + r.id + "' is a self-loop");
      bool have_kappa = false;
      while (!cur.at_end()) {
        const auto key_col = cur.column();
        const auto key = cur.identifier("key");
        cur.expect('=', "'=' after " + key);
        const auto value_col = cur.column();
        if (key == "law") {
          r.law.factors = parse_law(cur, r.source, refs.refs);
          r.law.explicit_law = true;
          continue;
        }
        const auto value = cur.token();
        if (key == "kappa") {
          r.law.kappa = decimal_value(cur, value, value_col, key);
          if (r.law.kappa < 0) cur.fail_at(value_col, "kappa must be nonnegative");
          have_kappa = true;
        } else if (key == "beta") {
          r.law.beta = rational_value(cur, value, value_col, key);
        } else {
          cur.fail_at(key_col, "unknown reaction attribute '" + key + "'");
        }
      }
      if (!have_kappa) cur.fail("reaction needs kappa=");
      pending.push_back(std::move(refs));
      reactions.push_back(std::move(r));
    } else {
      cur.fail_at(1, "unknown statement '" + keyword + "'");
    }
    if (end == text.size()) break;
  }

  // Species may be declared after the reactions that use them.
  for (const auto& p : pending) {
    for (const auto& ref : p.refs) {
      if (!declared.contains(ref.name)) {
        throw ParseError(p.line, ref.column, "undeclared species '" + ref.name + "'");
      }
    }
  }
  return ReactionNetwork(std::move(species), std::move(reactions));
}

ReactionNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open network file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str());
}

std::string serialize_network(const ReactionNetwork& net) {
  std::ostringstream out;
  for (const auto& s : net.species()) {
    out << "species " << s.name << " alpha=" << to_string(s.alpha) << " z0=" << format_decimal(s.z0) << '\n';
  }
  for (const auto& r : net.reactions()) {
    out << "reaction " << r.id << ": " << r.source.to_string() << " -> " << r.target.to_string()
        << " kappa=" << format_decimal(r.law.kappa) << " beta=" << to_string(r.law.beta);
    if (r.law.explicit_law) {
      out << " law=";
      if (r.law.factors.empty()) out << '1';
      for (std::size_t i = 0; i < r.law.factors.size(); ++i) {
        if (i) out << ';';
        out << r.law.factors[i].to_string();
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mssr
