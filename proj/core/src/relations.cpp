#include "qsr/relations.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <sstream>

namespace qsr {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// --- RCC-8 -----------------------------------------------------------------

constexpr uint16_t DC = 1, EC = 2, PO = 4, TPP = 8, NTPP = 16, TPPI = 32,
                   NTPPI = 64, EQ = 128;
constexpr uint16_t R8 = 0xFF;

// Rows/columns in code order dc, ec, po, tpp, ntpp, tppi, ntppi; the eq
// row and column are filled by the identity law in the constructor.
constexpr uint16_t kRcc8Table[7][7] = {
    // dc
    {R8, DC | EC | PO | TPP | NTPP, DC | EC | PO | TPP | NTPP,
     DC | EC | PO | TPP | NTPP, DC | EC | PO | TPP | NTPP, DC, DC},
    // ec
    {DC | EC | PO | TPPI | NTPPI, DC | EC | PO | TPP | TPPI | EQ,
     DC | EC | PO | TPP | NTPP, EC | PO | TPP | NTPP, PO | TPP | NTPP,
     DC | EC, DC},
    // po
    {DC | EC | PO | TPPI | NTPPI, DC | EC | PO | TPPI | NTPPI, R8,
     PO | TPP | NTPP, PO | TPP | NTPP, DC | EC | PO | TPPI | NTPPI,
     DC | EC | PO | TPPI | NTPPI},
    // tpp
    {DC, DC | EC, DC | EC | PO | TPP | NTPP, TPP | NTPP, NTPP,
     DC | EC | PO | TPP | TPPI | EQ, DC | EC | PO | TPPI | NTPPI},
    // ntpp
    {DC, DC, DC | EC | PO | TPP | NTPP, NTPP, NTPP,
     DC | EC | PO | TPP | NTPP, R8},
    // tppi
    {DC | EC | PO | TPPI | NTPPI, EC | PO | TPPI | NTPPI, PO | TPPI | NTPPI,
     PO | EQ | TPP | TPPI, PO | TPP | NTPP, TPPI | NTPPI, NTPPI},
    // ntppi
    {DC | EC | PO | TPPI | NTPPI, PO | TPPI | NTPPI, PO | TPPI | NTPPI,
     PO | TPPI | NTPPI, PO | TPPI | TPP | NTPP | NTPPI | EQ, NTPPI, NTPPI},
};

// --- Interval algebra ------------------------------------------------------

constexpr uint16_t IEQ = 1, LT = 2, GT = 4, D = 8, DI = 16, O = 32, OI = 64,
                   M = 128, MI = 256, S = 512, SI = 1024, F = 2048, FI = 4096;
constexpr uint16_t RIA = 0x1FFF;

// Rows/columns in code order <, >, d, di, o, oi, m, mi, s, si, f, fi; the
// '=' row and column are filled by the identity law. Cells the source table
// leaves blank are the universal relation.
constexpr uint16_t kIaTable[12][12] = {
    // <
    {LT, RIA, LT | O | M | D | S, LT, LT, LT | O | M | D | S, LT,
     LT | O | M | D | S, LT, LT, LT | O | M | D | S, LT},
    // >
    {RIA, GT, GT | OI | MI | D | F, GT, GT | OI | MI | D | F, GT,
     GT | OI | MI | D | F, GT, GT | OI | MI | D | F, GT, GT, GT},
    // d
    {LT, GT, D, RIA, LT | O | M | D | S, GT | OI | MI | D | F, LT, GT, D,
     GT | OI | MI | D | F, D, LT | O | M | D | S},
    // di
    {LT | O | M | DI | FI, GT | OI | DI | MI | SI,
     O | OI | D | S | F | DI | SI | FI | IEQ, DI, O | DI | FI, OI | DI | SI,
     O | DI | FI, OI | DI | SI, O | DI | FI, DI, OI | DI | SI, DI},
    // o
    {LT, GT | OI | DI | MI | SI, O | D | S, LT | O | M | DI | FI, LT | O | M,
     O | OI | D | S | F | DI | SI | FI | IEQ, LT, OI | DI | SI, O,
     O | DI | FI, O | D | S, LT | O | M},
    // oi
    {LT | O | M | DI | FI, GT, OI | D | F, GT | OI | MI | DI | SI,
     O | OI | D | DI | S | SI | F | FI | IEQ, GT | OI | MI, O | DI | FI, GT,
     OI | D | F, OI | GT | MI, OI, OI | DI | SI},
    // m
    {LT, GT | OI | DI | MI | SI, O | D | S, LT, LT, O | D | S, LT,
     F | FI | IEQ, M, M, D | S | O, LT},
    // mi
    {LT | O | M | DI | FI, GT, OI | D | F, GT, OI | D | F, GT, S | SI | IEQ,
     GT, D | F | OI, GT, MI, MI},
    // s
    {LT, GT, D, LT | O | M | DI | FI, LT | O | M, OI | D | F, LT, MI, S,
     S | SI | IEQ, D, LT | M | O},
    // si
    {LT | O | M | DI | FI, GT, OI | D | F, DI, O | DI | FI, OI, O | DI | FI,
     MI, S | SI | IEQ, SI, OI, DI},
    // f
    {LT, GT, D, GT | OI | MI | DI | SI, O | D | S, GT | OI | MI, M, GT, D,
     GT | OI | MI, F, F | FI | IEQ},
    // fi
    {LT, GT | OI | DI | MI | SI, O | D | S, DI, O, OI | DI | SI, M,
     SI | OI | DI, O, DI, F | FI | IEQ, FI},
};

std::vector<uint16_t> build_table(CalculusId id) {
  const bool rcc = id == CalculusId::rcc8;
  const int n = rcc ? 8 : 13;
  const int identity = rcc ? 7 : 0;  // EQ last for RCC-8, '=' first for IA
  std::vector<uint16_t> table(static_cast<size_t>(n) * n, 0);
  auto cell = [&](int a, int b) -> uint16_t& {
    return table[static_cast<size_t>(a) * n + b];
  };
  // Identity compositions are not transcribed; the identity law fills them.
  for (int i = 0; i < n; ++i) {
    cell(identity, i) = static_cast<uint16_t>(1u << i);
    cell(i, identity) = static_cast<uint16_t>(1u << i);
  }
  if (rcc) {
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b) cell(a, b) = kRcc8Table[a][b];
  } else {
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) cell(a + 1, b + 1) = kIaTable[a][b];
  }
  return table;
}

}  // namespace

std::string_view to_string(CalculusId id) {
  return id == CalculusId::rcc8 ? "rcc8" : "ia";
}

std::optional<CalculusId> calculus_from_string(std::string_view s) {
  const std::string l = lower(s);
  if (l == "rcc8" || l == "rcc-8") return CalculusId::rcc8;
  if (l == "ia" || l == "interval") return CalculusId::ia;
  return std::nullopt;
}

std::string_view Atom::name() const {
  return Calculus::get(calculus).atom_name(index);
}

RelationSet RelationSet::universal(CalculusId calc) {
  return {calc, calc == CalculusId::rcc8 ? R8 : RIA};
}

int RelationSet::count() const { return std::popcount(bits_); }

Atom RelationSet::the_atom() const {
  if (!is_singleton())
    throw ContractViolation("the_atom() on a non-singleton relation set");
  return {calc_, static_cast<uint8_t>(std::countr_zero(bits_))};
}

std::vector<Atom> RelationSet::atoms() const {
  std::vector<Atom> out;
  for (uint16_t b = bits_; b;) {
    const int i = std::countr_zero(b);
    out.push_back({calc_, static_cast<uint8_t>(i)});
    b = static_cast<uint16_t>(b & (b - 1));
  }
  return out;
}

bool RelationSet::subset_of(const RelationSet& other) const {
  if (calc_ != other.calc_)
    throw ContractViolation("relation sets from different calculi");
  return (bits_ & ~other.bits_) == 0;
}

RelationSet RelationSet::operator&(const RelationSet& other) const {
  if (calc_ != other.calc_)
    throw ContractViolation("relation sets from different calculi");
  return {calc_, static_cast<uint16_t>(bits_ & other.bits_)};
}

RelationSet RelationSet::operator|(const RelationSet& other) const {
  if (calc_ != other.calc_)
    throw ContractViolation("relation sets from different calculi");
  return {calc_, static_cast<uint16_t>(bits_ | other.bits_)};
}

Calculus::Calculus(CalculusId id, int arity, std::vector<std::string> names,
                   std::vector<std::string> word_aliases, int identity_index,
                   std::vector<uint8_t> converse_index,
                   std::vector<uint16_t> composition)
    : id_(id),
      arity_(arity),
      names_(std::move(names)),
      word_aliases_(std::move(word_aliases)),
      identity_index_(identity_index),
      converse_index_(std::move(converse_index)),
      composition_(std::move(composition)) {
  verify();
}

void Calculus::verify() const {
  // Embedded-data sanity check; a failure here is a build defect.
  uint16_t all = 0;
  for (int i = 0; i < arity_; ++i) all = static_cast<uint16_t>(all | (1u << i));
  if (universal().bits() != all)
    throw ContractViolation("universal set does not cover all atoms");
  for (int i = 0; i < arity_; ++i) {
    if (converse_index_[converse_index_[i]] != i)
      throw ContractViolation("converse is not an involution");
    const Atom a = atom(i);
    if (!(compose(identity(), a) == RelationSet::single(a)) ||
        !(compose(a, identity()) == RelationSet::single(a)))
      throw ContractViolation("identity law violated in embedded table");
    for (int j = 0; j < arity_; ++j) {
      const Atom b = atom(j);
      if (!(converse(compose(a, b)) == compose(converse(b), converse(a))))
        throw ContractViolation("converse symmetry violated in embedded table");
    }
  }
}

const Calculus& Calculus::get(CalculusId id) {
  static const Calculus rcc8_instance(
      CalculusId::rcc8, 8,
      {"DC", "EC", "PO", "TPP", "NTPP", "TPPI", "NTPPI", "EQ"}, {},
      /*identity_index=*/7,
      // dc, ec, po self-converse; tpp<->tppi, ntpp<->ntppi; eq self.
      {0, 1, 2, 5, 6, 3, 4, 7}, build_table(CalculusId::rcc8));
  static const Calculus ia_instance(
      CalculusId::ia, 13,
      {"=", "<", ">", "d", "di", "o", "oi", "m", "mi", "s", "si", "f", "fi"},
      {"eq", "lt", "gt", "d", "di", "o", "oi", "m", "mi", "s", "si", "f", "fi"},
      /*identity_index=*/0,
      // '=' self; < <-> >; d<->di; o<->oi; m<->mi; s<->si; f<->fi.
      {0, 2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 12, 11}, build_table(CalculusId::ia));
  return id == CalculusId::rcc8 ? rcc8_instance : ia_instance;
}

Atom Calculus::atom(int index) const {
  if (index < 0 || index >= arity_)
    throw ContractViolation("atom index out of range");
  return {id_, static_cast<uint8_t>(index)};
}

std::optional<Atom> Calculus::find(std::string_view name) const {
  const std::string l = lower(name);
  for (int i = 0; i < arity_; ++i) {
    if (lower(names_[i]) == l) return atom(i);
    if (!word_aliases_.empty() && word_aliases_[i] == l) return atom(i);
  }
  return std::nullopt;
}

RelationSet Calculus::converse(RelationSet s) const {
  uint16_t out = 0;
  for (uint16_t b = s.bits(); b;) {
    const int i = std::countr_zero(b);
    out = static_cast<uint16_t>(out | (1u << converse_index_[i]));
    b = static_cast<uint16_t>(b & (b - 1));
  }
  return {id_, out};
}

RelationSet Calculus::compose(Atom a, Atom b) const {
  return {id_, composition_[static_cast<size_t>(a.index) * arity_ + b.index]};
}

RelationSet Calculus::compose(RelationSet a, RelationSet b) const {
  if (a.calculus() != id_ || b.calculus() != id_)
    throw ContractViolation("compose across calculi");
  uint16_t out = 0;
  for (uint16_t x = a.bits(); x; x = static_cast<uint16_t>(x & (x - 1))) {
    const int i = std::countr_zero(x);
    for (uint16_t y = b.bits(); y; y = static_cast<uint16_t>(y & (y - 1))) {
      const int j = std::countr_zero(y);
      out = static_cast<uint16_t>(
          out | composition_[static_cast<size_t>(i) * arity_ + j]);
    }
  }
  return {id_, out};
}

Atom Calculus::parse_label(std::string_view text) const {
  // Trim surrounding whitespace and quotes.
  size_t b = 0, e = text.size();
  while (b < e && (std::isspace(static_cast<unsigned char>(text[b])) ||
                   text[b] == '\'' || text[b] == '"'))
    ++b;
  while (e > b && (std::isspace(static_cast<unsigned char>(text[e - 1])) ||
                   text[e - 1] == '\'' || text[e - 1] == '"'))
    --e;
  const std::string_view t = text.substr(b, e - b);
  if (t.empty()) throw ParseError(std::string(text), "empty token");

  if (std::all_of(t.begin(), t.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
      throw ParseError(std::string(t), "not an integer");
    if (value == 0 || (value & (value - 1)) != 0)
      throw ParseError(std::string(t), "not a power of two");
    const int index = std::countr_zero(value);
    if (index >= arity_)
      throw ParseError(std::string(t), "code out of range for this calculus");
    return atom(index);
  }
  if (const auto a = find(t)) return *a;
  throw ParseError(std::string(t), "unknown relation name");
}

std::string Calculus::atom_display(Atom a, KeyStyle style) const {
  if (style == KeyStyle::integer_tuples) return std::to_string(a.code());
  return word_aliases_.empty() ? names_[a.index] : word_aliases_[a.index];
}

std::string Calculus::table_json(KeyStyle style) const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (int a = 0; a < arity_; ++a) {
    for (int b = 0; b < arity_; ++b) {
      if (!first) out << ", ";
      first = false;
      out << '(' << atom_display(atom(a), style) << ", "
          << atom_display(atom(b), style) << "): [";
      const RelationSet comp = compose(atom(a), atom(b));
      // The unconstrained composition is written as an empty list.
      if (!(comp == universal())) {
        bool inner_first = true;
        for (const Atom& c : comp.atoms()) {
          if (!inner_first) out << ", ";
          inner_first = false;
          out << atom_display(c, style);
        }
      }
      out << ']';
    }
  }
  out << '}';
  return out.str();
}

std::string Calculus::base_elements_block() const {
  std::ostringstream out;
  for (int i = 0; i < arity_; ++i) {
    if (id_ == CalculusId::rcc8)
      out << "    " << names_[i] << " = " << (1u << i) << '\n';
    else
      out << "    '" << names_[i] << "': " << (1u << i) << '\n';
  }
  return out.str();
}

RelationSet compose(const RelationSet& a, const RelationSet& b) {
  if (a.calculus() != b.calculus())
    throw ContractViolation("compose across calculi");
  return Calculus::get(a.calculus()).compose(a, b);
}

RelationSet converse(const RelationSet& a) {
  return Calculus::get(a.calculus()).converse(a);
}

}  // namespace qsr
