#include <cstdio>
#include <sstream>

#include "scp/relations.hpp"

namespace scp {

std::string Bitset::to_hex() const {
  std::string out;
  char buf[17];
  for (auto w : words_) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
    out += buf;
  }
  return out.empty() ? "-" : out;
}

Bitset Bitset::from_hex(std::size_t size, const std::string& hex) {
  Bitset b(size);
  if (hex == "-") {
    if (!b.words_.empty()) throw std::runtime_error("bitset width mismatch");
    return b;
  }
  if (hex.size() != b.words_.size() * 16) throw std::runtime_error("bitset width mismatch");
  for (std::size_t w = 0; w < b.words_.size(); ++w)
    b.words_[w] = std::stoull(hex.substr(w * 16, 16), nullptr, 16);
  for (std::size_t i = size; i < b.words_.size() * 64; ++i)
    if ((b.words_[i >> 6] >> (i & 63)) & 1u) throw std::runtime_error("bitset has bits past its size");
  return b;
}

namespace {

constexpr const char* kMagic = "SCPC1";

void write_relation(std::ostream& os, const char* tag, const Relation& rel) {
  for (std::size_t a = 0; a < rel.size(); ++a) os << tag << ' ' << a << ' ' << rel[a].to_hex() << '\n';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : in_(std::string(text)) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw GrammarError("compiled table truncated");
    return w;
  }
  std::size_t number() {
    auto w = word();
    try {
      std::size_t used = 0;
      auto v = std::stoull(w, &used);
      if (used != w.size()) throw std::invalid_argument(w);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw GrammarError("compiled table: expected number, found '" + w + "'");
    }
  }
  void expect(const std::string& w) {
    auto got = word();
    if (got != w) throw GrammarError("compiled table: expected '" + w + "', found '" + got + "'");
  }
  Bitset bits(std::size_t n) {
    try {
      return Bitset::from_hex(n, word());
    } catch (const GrammarError&) {
      throw;
    } catch (const std::exception& e) {
      throw GrammarError(std::string("compiled table: ") + e.what());
    }
  }

 private:
  std::istringstream in_;
};

Relation read_relation(Reader& r, const char* tag, std::size_t n) {
  Relation rel;
  for (std::size_t a = 0; a < n; ++a) {
    r.expect(tag);
    if (r.number() != a) throw GrammarError(std::string("compiled table: bad ") + tag + " row");
    rel.push_back(r.bits(n));
  }
  return rel;
}

std::string set_names(const Grammar& g, const Bitset& b) {
  std::string out = "{";
  bool first = true;
  for (auto s : b.members()) {
    out += (first ? "" : ", ") + g.name(static_cast<SymbolId>(s));
    first = false;
  }
  return out + "}";
}

}  // namespace

bool looks_compiled(std::string_view text) { return text.substr(0, 5) == kMagic; }

std::string serialize(const CompiledGrammar& cg) {
  const auto& g = cg.grammar;
  std::ostringstream os;
  os << kMagic << '\n';
  os << "symbols " << g.symbol_count() << '\n';
  for (const auto& s : g.symbols())
    os << s.id << ' ' << (s.kind == SymbolKind::terminal ? 'T' : 'N') << ' ' << s.name << '\n';
  os << "productions " << g.productions().size() << '\n';
  for (const auto& p : g.productions()) {
    os << p.id << ' ' << p.lhs << ' ' << p.rhs.size();
    for (auto s : p.rhs) os << ' ' << s;
    os << '\n';
  }
  os << "roots " << g.roots().size();
  for (auto r : g.roots()) os << ' ' << r;
  os << '\n';
  os << "nullable " << cg.nullable.to_hex() << '\n';
  write_relation(os, "lpd", cg.lpd);
  write_relation(os, "rpd", cg.rpd);
  write_relation(os, "la", cg.la);
  write_relation(os, "ra", cg.ra);
  os << "lm " << cg.lm.to_hex() << '\n';
  os << "rm " << cg.rm.to_hex() << '\n';
  for (std::size_t s = 0; s < cg.coverage.size(); ++s) {
    os << "coverage " << s << ' ' << cg.coverage[s].size();
    for (const auto& e : cg.coverage[s])
      os << ' ' << e.production << ':' << e.position << ':' << to_string(e.klass) << ':'
         << e.pre_skip_left << ':' << e.pre_skip_right;
    os << '\n';
  }
  for (std::size_t s = 0; s < cg.epsilon_analyses.size(); ++s) {
    os << "epsilon " << s << ' ' << cg.epsilon_analyses[s].size();
    for (auto p : cg.epsilon_analyses[s]) os << ' ' << p;
    os << '\n';
  }
  os << "end\n";
  return os.str();
}

CompiledGrammar deserialize(std::string_view text) {
  Reader r(text);
  r.expect(kMagic);
  r.expect("symbols");
  std::size_t n = r.number();
  std::vector<std::string> names;
  std::vector<char> kinds;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.number() != i) throw GrammarError("compiled table: symbol ids not dense");
    auto kind = r.word();
    if (kind != "T" && kind != "N") throw GrammarError("compiled table: bad symbol kind");
    kinds.push_back(kind[0]);
    names.push_back(r.word());
  }
  r.expect("productions");
  std::size_t m = r.number();
  std::vector<std::pair<SymbolId, std::vector<SymbolId>>> prods;
  for (std::size_t i = 0; i < m; ++i) {
    if (r.number() != i) throw GrammarError("compiled table: production ids not dense");
    auto lhs = static_cast<SymbolId>(r.number());
    std::size_t k = r.number();
    std::vector<SymbolId> rhs;
    for (std::size_t j = 0; j < k; ++j) rhs.push_back(static_cast<SymbolId>(r.number()));
    prods.emplace_back(lhs, std::move(rhs));
  }
  r.expect("roots");
  std::size_t k = r.number();
  std::vector<SymbolId> roots;
  for (std::size_t j = 0; j < k; ++j) roots.push_back(static_cast<SymbolId>(r.number()));

  Grammar g(std::move(names), std::move(prods), std::move(roots));
  for (std::size_t i = 0; i < n; ++i)
    if ((kinds[i] == 'T') != g.is_terminal(static_cast<SymbolId>(i)))
      throw GrammarError("compiled table: symbol kind disagrees with productions");

  CompiledGrammar stored;
  r.expect("nullable");
  stored.nullable = r.bits(n);
  stored.lpd = read_relation(r, "lpd", n);
  stored.rpd = read_relation(r, "rpd", n);
  stored.la = read_relation(r, "la", n);
  stored.ra = read_relation(r, "ra", n);
  r.expect("lm");
  stored.lm = r.bits(n);
  r.expect("rm");
  stored.rm = r.bits(n);

  // Coverage and epsilon rows are checked against recomputation below, so
  // reading them is only a format check.
  auto fresh = compile(std::move(g));
  for (std::size_t s = 0; s < n; ++s) {
    r.expect("coverage");
    if (r.number() != s) throw GrammarError("compiled table: bad coverage row");
    std::size_t c = r.number();
    if (c != fresh.coverage[s].size()) throw GrammarError("compiled table: coverage mismatch");
    for (std::size_t j = 0; j < c; ++j) {
      const auto& e = fresh.coverage[s][j];
      std::string expect = std::to_string(e.production) + ':' + std::to_string(e.position) + ':' +
                           to_string(e.klass) + ':' + std::to_string(e.pre_skip_left) + ':' +
                           std::to_string(e.pre_skip_right);
      if (r.word() != expect) throw GrammarError("compiled table: coverage mismatch");
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    r.expect("epsilon");
    if (r.number() != s) throw GrammarError("compiled table: bad epsilon row");
    std::size_t c = r.number();
    if (c != fresh.epsilon_analyses[s].size()) throw GrammarError("compiled table: epsilon mismatch");
    for (std::size_t j = 0; j < c; ++j)
      if (r.number() != fresh.epsilon_analyses[s][j])
        throw GrammarError("compiled table: epsilon mismatch");
  }
  r.expect("end");
  if (stored.nullable != fresh.nullable || stored.lpd != fresh.lpd || stored.rpd != fresh.rpd ||
      stored.la != fresh.la || stored.ra != fresh.ra || stored.lm != fresh.lm || stored.rm != fresh.rm)
    throw GrammarError("compiled table: relation tables disagree with the grammar");
  return fresh;
}

std::string dump_relations(const CompiledGrammar& cg) {
  const auto& g = cg.grammar;
  std::ostringstream os;
  os << "nullable = " << set_names(g, cg.nullable) << '\n';
  auto rows = [&](const char* tag, const Relation& rel) {
    for (const auto& s : g.symbols()) os << tag << '(' << s.name << ") = " << set_names(g, rel[s.id]) << '\n';
  };
  rows("LPD", cg.lpd);
  rows("RPD", cg.rpd);
  rows("LA", cg.la);
  rows("RA", cg.ra);
  os << "LM = " << set_names(g, cg.lm) << '\n';
  os << "RM = " << set_names(g, cg.rm) << '\n';
  for (const auto& s : g.symbols()) {
    for (const auto& e : cg.coverage[s.id])
      os << "coverage(" << s.name << ") " << to_string(e.klass) << ' '
         << g.render(g.production(e.production)) << " @" << e.position
         << " skip=" << e.pre_skip_left << '/' << e.pre_skip_right << '\n';
  }
  for (const auto& w : cg.warnings) os << "warning: " << w << '\n';
  return os.str();
}

}  // namespace scp
