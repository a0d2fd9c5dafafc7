#include "mssr/event.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <stdexcept>

namespace mssr {

namespace {

constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
constexpr auto kMax = std::numeric_limits<std::int64_t>::max();

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= text_.size();
  }
  bool accept(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }
  bool accept_word(std::string_view word) {
    skip();
    if (text_.substr(pos_, word.size()) != word) return false;
    const auto after = pos_ + word.size();
    if (after < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_')) {
      return false;
    }
    pos_ = after;
    return true;
  }
  std::string identifier() {
    skip();
    const auto start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    }
    if (start == pos_) fail("expected a species name");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::int64_t integer() {
    skip();
    std::int64_t value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("event: " + what + " at position " + std::to_string(pos_ + 1));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

bool EventSet::Clause::contains(std::int64_t v) const {
  const bool hit = range ? (v >= lo && v <= hi) : values.contains(v);
  return hit != negate;
}

EventSet EventSet::parse(std::string_view text) {
  Cursor cur(text);
  std::vector<Clause> clauses;
  if (cur.done()) return EventSet{};
  while (true) {
    Clause c;
    c.species = cur.identifier();
    if (cur.accept_word("in")) {
      if (cur.accept("{")) {
        do {
          c.values.insert(cur.integer());
        } while (cur.accept(","));
        cur.expect("}");
      } else if (cur.accept("[")) {
        c.range = true;
        c.lo = cur.integer();
        cur.expect(",");
        c.hi = cur.integer();
        cur.expect("]");
        if (c.lo > c.hi) cur.fail("empty range");
      } else {
        cur.fail("expected '{' or '['");
      }
    } else if (cur.accept("<=")) {
      c.range = true, c.lo = kMin, c.hi = cur.integer();
    } else if (cur.accept(">=")) {
      c.range = true, c.lo = cur.integer(), c.hi = kMax;
    } else if (cur.accept("==") || cur.accept("=")) {
      c.values.insert(cur.integer());
    } else if (cur.accept("!=")) {
      c.values.insert(cur.integer());
      c.negate = true;
    } else if (cur.accept("<")) {
      c.range = true, c.lo = kMin, c.hi = cur.integer() - 1;
    } else if (cur.accept(">")) {
      c.range = true, c.lo = cur.integer() + 1, c.hi = kMax;
    } else {
      cur.fail("expected 'in' or a comparison");
    }
    clauses.push_back(std::move(c));
    if (cur.done()) break;
    if (!cur.accept("&&") && !cur.accept("&") && !cur.accept_word("and")) cur.fail("expected 'and'");
  }
  return EventSet(std::move(clauses));
}

std::string EventSet::to_string() const {
  std::string out;
  for (const auto& c : clauses_) {
    if (!out.empty()) out += " and ";
    out += c.species;
    if (c.range) {
      if (c.lo == kMin) out += " <= " + std::to_string(c.hi);
      else if (c.hi == kMax) out += " >= " + std::to_string(c.lo);
      else out += " in [" + std::to_string(c.lo) + "," + std::to_string(c.hi) + "]";
    } else if (c.negate && c.values.size() == 1) {
      out += " != " + std::to_string(*c.values.begin());
    } else {
      out += " in {";
      bool first = true;
      for (auto v : c.values) {
        if (!first) out += ",";
        out += std::to_string(v);
        first = false;
      }
      out += "}";
    }
  }
  return out;
}

std::vector<std::string> EventSet::species() const {
  std::vector<std::string> names;
  for (const auto& c : clauses_) {
    if (std::find(names.begin(), names.end(), c.species) == names.end()) names.push_back(c.species);
  }
  return names;
}

bool EventSet::contains(const std::vector<std::string>& names, std::span<const std::int64_t> state) const {
  for (const auto& c : clauses_) {
    auto it = std::find(names.begin(), names.end(), c.species);
    if (it == names.end()) throw std::invalid_argument("event refers to unknown species '" + c.species + "'");
    if (!c.contains(state[static_cast<std::size_t>(it - names.begin())])) return false;
  }
  return true;
}

}  // namespace mssr
