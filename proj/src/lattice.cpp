#include "scp/lattice.hpp"

#include <cctype>
#include <sstream>

namespace scp {

namespace {

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace

InputLattice::InputLattice(std::size_t breaking_points, std::vector<LexicalItem> items)
    : points_(breaking_points), items_(std::move(items)) {
  if (points_ == 0) throw LatticeError("a lattice needs at least one breaking point");
  std::size_t n = points_ - 1;
  for (const auto& it : items_) {
    if (it.fbp >= it.lbp)
      throw LatticeError("item '" + it.unit + "': fbp " + std::to_string(it.fbp) +
                         " must be below lbp " + std::to_string(it.lbp));
    if (it.lbp > n)
      throw LatticeError("item '" + it.unit + "' ends past the last breaking point");
    if (it.preterminal.empty()) throw LatticeError("item '" + it.unit + "' has no preterminal");
  }
  if (n == 0) return;
  if (items_.empty()) throw LatticeError("lattice with breaking points has no items");

  std::vector<bool> from_start(points_, false), to_end(points_, false);
  from_start[0] = true;
  for (std::size_t k = 0; k <= n; ++k)
    if (from_start[k])
      for (const auto& it : items_)
        if (it.fbp == k) from_start[it.lbp] = true;
  to_end[n] = true;
  for (std::size_t k = n + 1; k-- > 0;)
    if (to_end[k])
      for (const auto& it : items_)
        if (it.lbp == k) to_end[it.fbp] = true;
  for (std::size_t k = 0; k <= n; ++k)
    if (!from_start[k] || !to_end[k])
      throw LatticeError("disconnected lattice: breaking point " + std::to_string(k) +
                         " lies on no path from 0 to " + std::to_string(n));
}

InputLattice tokenize_plain(std::string_view text, const Lexicon& lexicon, bool identity) {
  auto tokens = split_ws(text);
  std::vector<LexicalItem> items;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = lexicon.find(tokens[i]);
    if (it != lexicon.end() && !it->second.empty()) {
      for (const auto& cat : it->second) items.push_back({tokens[i], cat, i, i + 1});
    } else if (identity) {
      items.push_back({tokens[i], tokens[i], i, i + 1});
    } else {
      throw LatticeError("unknown token '" + tokens[i] + "' at position " + std::to_string(i));
    }
  }
  return InputLattice(tokens.size() + 1, std::move(items));
}

Lexicon load_lexicon(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto words = split_ws(strip_comment(line));
    if (words.empty()) continue;
    if (words.size() < 2)
      throw LatticeError("lexicon line " + std::to_string(lineno) + ": entry has no category");
    auto& cats = lex[words[0]];
    cats.insert(cats.end(), words.begin() + 1, words.end());
  }
  return lex;
}

InputLattice load_lattice(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  long long points = -1;
  std::vector<LexicalItem> items;
  auto malformed = [&](const std::string& why) {
    return LatticeError("lattice line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    // Comments only outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '\\' && quoted) {
        ++i;
      } else if (body[i] == '"') {
        quoted = !quoted;
      } else if (body[i] == '#' && !quoted) {
        body.resize(i);
        break;
      }
    }
    std::istringstream ls(body);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "%points") {
      if (points >= 0) throw malformed("duplicate %points header");
      std::string extra;
      if (!(ls >> points) || points < 1 || (ls >> extra)) throw malformed("bad %points header");
      continue;
    }
    if (points < 0) throw malformed("item before %points header");
    LexicalItem item;
    try {
      std::size_t used = 0;
      item.fbp = std::stoull(first, &used);
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw malformed("expected breaking point, found '" + first + "'");
    }
    if (!(ls >> item.lbp)) throw malformed("missing lbp");
    ls >> std::ws;
    if (ls.peek() != '"') throw malformed("missing quoted surface form");
    ls.get();
    bool closed = false;
    for (int c; (c = ls.get()) != EOF;) {
      if (c == '\\') {
        int d = ls.get();
        if (d == EOF) break;
        item.unit.push_back(static_cast<char>(d));
      } else if (c == '"') {
        closed = true;
        break;
      } else {
        item.unit.push_back(static_cast<char>(c));
      }
    }
    if (!closed) throw malformed("unterminated surface form");
    std::string extra;
    if (!(ls >> item.preterminal)) throw malformed("missing preterminal");
    if (ls >> extra) throw malformed("trailing text '" + extra + "'");
    items.push_back(std::move(item));
  }
  if (points < 0) throw LatticeError("lattice has no %points header");
  return InputLattice(static_cast<std::size_t>(points), std::move(items));
}

std::string save_lattice(const InputLattice& lattice) {
  std::ostringstream os;
  os << "%points " << lattice.breaking_points() << '\n';
  for (const auto& it : lattice.items()) {
    os << it.fbp << ' ' << it.lbp << " \"";
    for (char c : it.unit) {
      if (c == '"' || c == '\\') os << '\\';
      os << c;
    }
    os << "\" " << it.preterminal << '\n';
  }
  return os.str();
}

}  // namespace scp
