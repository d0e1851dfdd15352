#include <doctest.h>

#include <set>
#include <string>

#include "qsr/relations.hpp"

using namespace qsr;

namespace {

RelationSet named_set(const Calculus& calc, std::initializer_list<const char*> names) {
  RelationSet out = calc.empty();
  for (const char* n : names) out = out | RelationSet::single(*calc.find(n));
  return out;
}

}  // namespace

TEST_CASE("atom codes and names are the published powers of two") {
  const Calculus& rcc8 = Calculus::rcc8();
  CHECK(rcc8.arity() == 8);
  const std::pair<const char*, uint16_t> rcc8_codes[] = {
      {"DC", 1},   {"EC", 2},    {"PO", 4},     {"TPP", 8},
      {"NTPP", 16}, {"TPPI", 32}, {"NTPPI", 64}, {"EQ", 128}};
  for (const auto& [name, code] : rcc8_codes) {
    const auto atom = rcc8.find(name);
    REQUIRE(atom.has_value());
    CHECK(atom->code() == code);
    CHECK(atom->name() == name);
  }
  CHECK(rcc8.identity().name() == "EQ");

  const Calculus& ia = Calculus::ia();
  CHECK(ia.arity() == 13);
  const std::pair<const char*, uint16_t> ia_codes[] = {
      {"=", 1},   {"<", 2},    {">", 4},    {"d", 8},   {"di", 16},
      {"o", 32},  {"oi", 64},  {"m", 128},  {"mi", 256}, {"s", 512},
      {"si", 1024}, {"f", 2048}, {"fi", 4096}};
  for (const auto& [name, code] : ia_codes) {
    const auto atom = ia.find(name);
    REQUIRE(atom.has_value());
    CHECK(atom->code() == code);
  }
  CHECK(ia.identity().name() == "=");
}

TEST_CASE("converses are the expected pairings") {
  const Calculus& rcc8 = Calculus::rcc8();
  auto conv = [&](const char* a) {
    return std::string(rcc8.converse(*rcc8.find(a)).name());
  };
  CHECK(conv("DC") == "DC");
  CHECK(conv("EC") == "EC");
  CHECK(conv("PO") == "PO");
  CHECK(conv("TPP") == "TPPI");
  CHECK(conv("NTPP") == "NTPPI");
  CHECK(conv("EQ") == "EQ");

  const Calculus& ia = Calculus::ia();
  auto iconv = [&](const char* a) {
    return std::string(ia.converse(*ia.find(a)).name());
  };
  CHECK(iconv("=") == "=");
  CHECK(iconv("<") == ">");
  CHECK(iconv("d") == "di");
  CHECK(iconv("o") == "oi");
  CHECK(iconv("m") == "mi");
  CHECK(iconv("s") == "si");
  CHECK(iconv("f") == "fi");
}

TEST_CASE("algebra invariants hold for every atomic pair") {
  for (const Calculus* calc : {&Calculus::rcc8(), &Calculus::ia()}) {
    uint16_t all = 0;
    for (int i = 0; i < calc->arity(); ++i) {
      const Atom a = calc->atom(i);
      all = static_cast<uint16_t>(all | a.code());
      CHECK(calc->converse(calc->converse(a)) == a);
      CHECK(calc->compose(calc->identity(), a) == RelationSet::single(a));
      CHECK(calc->compose(a, calc->identity()) == RelationSet::single(a));
      // An atom composed with its converse must allow identity.
      CHECK(calc->compose(a, calc->converse(a)).contains(calc->identity()));
      for (int j = 0; j < calc->arity(); ++j) {
        const Atom b = calc->atom(j);
        const RelationSet ab = calc->compose(a, b);
        CHECK(!ab.is_empty());  // compositions of base relations are never empty
        CHECK(calc->converse(ab) ==
              calc->compose(calc->converse(b), calc->converse(a)));
      }
    }
    CHECK(calc->universal().bits() == all);
  }
}

TEST_CASE("pinned RCC-8 composition cells") {
  const Calculus& c = Calculus::rcc8();
  auto comp = [&](const char* a, const char* b) {
    return c.compose(*c.find(a), *c.find(b));
  };
  // From the prose walk-through: ec then ntpp leaves {po, tpp, ntpp}.
  CHECK(comp("EC", "NTPP") == named_set(c, {"PO", "TPP", "NTPP"}));
  // ec(a,b), po(b,c) allows dc, ec, po, tpp, ntpp.
  CHECK(comp("EC", "PO") == named_set(c, {"DC", "EC", "PO", "TPP", "NTPP"}));
  // Table-dictionary fragments: (1, 2), (128, 64), (128, 128).
  CHECK(comp("DC", "EC") == named_set(c, {"DC", "EC", "PO", "TPP", "NTPP"}));
  CHECK(comp("EQ", "NTPPI") == named_set(c, {"NTPPI"}));
  CHECK(comp("EQ", "EQ") == named_set(c, {"EQ"}));
  // Cells recited in the appendix chain of thought.
  CHECK(comp("PO", "DC") == named_set(c, {"DC", "EC", "PO", "TPPI", "NTPPI"}));
  CHECK(comp("EC", "DC") == named_set(c, {"DC", "EC", "PO", "TPPI", "NTPPI"}));
  CHECK(comp("TPP", "DC") == named_set(c, {"DC"}));
  CHECK(comp("NTPP", "DC") == named_set(c, {"DC"}));
  // Unconstrained cells.
  CHECK(comp("DC", "DC") == c.universal());
  CHECK(comp("PO", "PO") == c.universal());
  CHECK(comp("NTPP", "NTPPI") == c.universal());
}

TEST_CASE("pinned IA composition cells") {
  const Calculus& c = Calculus::ia();
  auto comp = [&](const char* a, const char* b) {
    return c.compose(*c.find(a), *c.find(b));
  };
  CHECK(comp("fi", ">") == named_set(c, {">", "oi", "di", "mi", "si"}));
  CHECK(comp("m", ">") == named_set(c, {">", "oi", "di", "mi", "si"}));
  CHECK(comp("di", "oi") == named_set(c, {"oi", "di", "si"}));
  CHECK(comp("di", "fi") == named_set(c, {"di"}));
  CHECK(comp("<", ">") == c.universal());
  CHECK(comp("m", "mi") == named_set(c, {"=", "f", "fi"}));
  CHECK(comp("s", "si") == named_set(c, {"=", "s", "si"}));
}

TEST_CASE("set-level composition and converse") {
  const Calculus& c = Calculus::rcc8();
  const RelationSet a = named_set(c, {"TPP", "NTPP"});
  const RelationSet b = named_set(c, {"EQ"});
  CHECK(compose(a, b) == a);
  CHECK(converse(a) == named_set(c, {"TPPI", "NTPPI"}));
  CHECK(compose(c.empty(), b).is_empty());
  // Mixing calculi is a contract violation.
  CHECK_THROWS_AS(
      (void)(a & RelationSet::universal(CalculusId::ia)), ContractViolation);
}

TEST_CASE("RelationSet basics") {
  const Calculus& c = Calculus::rcc8();
  RelationSet s = named_set(c, {"DC", "PO"});
  CHECK(s.count() == 2);
  CHECK(!s.is_singleton());
  CHECK_THROWS_AS(s.the_atom(), ContractViolation);
  CHECK(s.subset_of(c.universal()));
  CHECK(!c.universal().subset_of(s));
  const auto atoms = s.atoms();
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0].name() == "DC");  // code order
  CHECK(atoms[1].name() == "PO");
  CHECK(named_set(c, {"PO"}).the_atom().name() == "PO");
}

TEST_CASE("parse_label accepts codes and names, rejects junk") {
  const Calculus& rcc8 = Calculus::rcc8();
  CHECK(rcc8.parse_label("64").name() == "NTPPI");
  CHECK(rcc8.parse_label("'EQ'").name() == "EQ");
  CHECK(rcc8.parse_label("  tpp ").name() == "TPP");
  CHECK_THROWS_AS(rcc8.parse_label("3"), ParseError);
  CHECK_THROWS_AS(rcc8.parse_label("0"), ParseError);
  CHECK_THROWS_AS(rcc8.parse_label("256"), ParseError);  // IA-only code
  CHECK_THROWS_AS(rcc8.parse_label("frob"), ParseError);
  CHECK_THROWS_AS(rcc8.parse_label(""), ParseError);

  const Calculus& ia = Calculus::ia();
  CHECK(ia.parse_label("1024").name() == "si");
  CHECK(ia.parse_label("=").name() == "=");
  CHECK(ia.parse_label("eq").name() == "=");  // word alias
  CHECK(ia.parse_label("lt").name() == "<");
  CHECK_THROWS_AS(ia.parse_label("8192"), ParseError);
}

TEST_CASE("table_json matches the published dictionary fragments") {
  const Calculus& rcc8 = Calculus::rcc8();
  const std::string table = rcc8.table_json(KeyStyle::integer_tuples);
  CHECK(table.substr(0, 40) ==
        "{(1, 1): [], (1, 2): [1, 2, 4, 8, 16], (");
  const std::string tail_part = "(128, 64): [64], (128, 128): [128]}";
  CHECK(table.substr(table.size() - tail_part.size()) == tail_part);
  // All 64 keys are present.
  size_t keys = 0;
  for (size_t pos = 0; (pos = table.find("): [", pos)) != std::string::npos; ++pos)
    ++keys;
  CHECK(keys == 64);

  const Calculus& ia = Calculus::ia();
  const std::string named = ia.table_json(KeyStyle::name_tuples);
  CHECK(named.substr(0, 33) == "{(eq, eq): [eq], (eq, lt): [lt], ");
  // The fi/gt cell carries exactly the published atoms (we emit them in
  // code order).
  CHECK(named.find("(fi, gt): [gt, di, oi, mi, si]") != std::string::npos);
  size_t ia_keys = 0;
  for (size_t pos = 0; (pos = named.find("): [", pos)) != std::string::npos; ++pos)
    ++ia_keys;
  CHECK(ia_keys == 169);
}

TEST_CASE("base elements blocks") {
  CHECK(Calculus::rcc8().base_elements_block() ==
        "    DC = 1\n"
        "    EC = 2\n"
        "    PO = 4\n"
        "    TPP = 8\n"
        "    NTPP = 16\n"
        "    TPPI = 32\n"
        "    NTPPI = 64\n"
        "    EQ = 128\n");
  CHECK(Calculus::ia().base_elements_block() ==
        "    '=': 1\n"
        "    '<': 2\n"
        "    '>': 4\n"
        "    'd': 8\n"
        "    'di': 16\n"
        "    'o': 32\n"
        "    'oi': 64\n"
        "    'm': 128\n"
        "    'mi': 256\n"
        "    's': 512\n"
        "    'si': 1024\n"
        "    'f': 2048\n"
        "    'fi': 4096\n");
}

TEST_CASE("calculus lookup from strings") {
  CHECK(calculus_from_string("rcc8") == CalculusId::rcc8);
  CHECK(calculus_from_string("RCC-8") == CalculusId::rcc8);
  CHECK(calculus_from_string("ia") == CalculusId::ia);
  CHECK(calculus_from_string("interval") == CalculusId::ia);
  CHECK(!calculus_from_string("rcc5").has_value());
}
