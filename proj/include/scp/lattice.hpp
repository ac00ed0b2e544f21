// Parsing input: lexical items over breaking points. Items may span several
// breaking points (multi-word expressions) and several items may share a
// span (lexical ambiguity).

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scp {

class LatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LexicalItem {
  std::string unit;         // surface text
  std::string preterminal;  // grammar symbol name, bound at parse time
  std::size_t fbp = 0;
  std::size_t lbp = 0;

  friend bool operator==(const LexicalItem&, const LexicalItem&) = default;
};

class InputLattice {
 public:
  // Validates: fbp < lbp <= last, connectivity, and at least one item when
  // there is more than one breaking point.
  InputLattice(std::size_t breaking_points, std::vector<LexicalItem> items);

  std::size_t breaking_points() const { return points_; }
  std::size_t last() const { return points_ - 1; }
  const std::vector<LexicalItem>& items() const { return items_; }

  friend bool operator==(const InputLattice&, const InputLattice&) = default;

 private:
  std::size_t points_;
  std::vector<LexicalItem> items_;
};

// Surface form -> categories, in lexicon order.
using Lexicon = std::map<std::string, std::vector<std::string>, std::less<>>;

// Whitespace tokenization. With no lexicon entry and identity=true, a token
// maps to the category of the same name.
InputLattice tokenize_plain(std::string_view text, const Lexicon& lexicon, bool identity = false);

// Lexicon file: `surface CAT CAT ...` per line, `#` comments.
Lexicon load_lexicon(std::string_view text);

// Lattice file: `%points N` header, then `FBP LBP "surface" PRETERMINAL`.
InputLattice load_lattice(std::string_view text);
std::string save_lattice(const InputLattice& lattice);

}  // namespace scp
