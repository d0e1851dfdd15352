#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsr/errors.hpp"

namespace qsr {

enum class CalculusId : uint8_t { rcc8, ia };

std::string_view to_string(CalculusId id);
std::optional<CalculusId> calculus_from_string(std::string_view s);

class Calculus;

/// One base relation of a calculus. `index` is the position in the atom
/// list; the integer code is always 1 << index.
struct Atom {
  CalculusId calculus;
  uint8_t index;

  uint16_t code() const { return static_cast<uint16_t>(1u << index); }
  std::string_view name() const;

  bool operator==(const Atom&) const = default;
};

/// A set of base relations as a fixed-width bitmask. The empty set denotes
/// inconsistency; the universal set is the unconstrained label.
class RelationSet {
public:
  RelationSet(CalculusId calc, uint16_t bits) : calc_(calc), bits_(bits) {}
  static RelationSet empty(CalculusId calc) { return {calc, 0}; }
  static RelationSet universal(CalculusId calc);
  static RelationSet single(Atom a) { return {a.calculus, a.code()}; }

  CalculusId calculus() const { return calc_; }
  uint16_t bits() const { return bits_; }

  bool is_empty() const { return bits_ == 0; }
  bool is_singleton() const { return bits_ != 0 && (bits_ & (bits_ - 1)) == 0; }
  bool contains(Atom a) const { return calc_ == a.calculus && (bits_ & a.code()); }
  int count() const;

  /// The unique member; throws unless is_singleton().
  Atom the_atom() const;

  std::vector<Atom> atoms() const;

  bool subset_of(const RelationSet& other) const;

  RelationSet operator&(const RelationSet& other) const;
  RelationSet operator|(const RelationSet& other) const;
  bool operator==(const RelationSet&) const = default;

private:
  CalculusId calc_;
  uint16_t bits_;
};

enum class KeyStyle : uint8_t { integer_tuples, name_tuples };

/// Immutable description of one calculus: atoms, identity, converse pairs
/// and the composition table. Obtain instances via Calculus::get(); they
/// live for the duration of the program and are shareable across threads.
class Calculus {
public:
  static const Calculus& get(CalculusId id);
  static const Calculus& rcc8() { return get(CalculusId::rcc8); }
  static const Calculus& ia() { return get(CalculusId::ia); }

  CalculusId id() const { return id_; }
  int arity() const { return arity_; }

  Atom atom(int index) const;
  Atom identity() const { return atom(identity_index_); }
  std::string_view atom_name(int index) const { return names_[index]; }

  /// Case-insensitive name lookup; accepts display names ("TPP", "<") and,
  /// for IA, the word aliases used in name-keyed tables ("lt", "eq").
  std::optional<Atom> find(std::string_view name) const;

  Atom converse(Atom a) const { return atom(converse_index_[a.index]); }
  RelationSet converse(RelationSet s) const;

  RelationSet compose(Atom a, Atom b) const;
  RelationSet compose(RelationSet a, RelationSet b) const;

  RelationSet universal() const { return RelationSet::universal(id_); }
  RelationSet empty() const { return RelationSet::empty(id_); }

  /// Accepts a decimal integer code or a relation name.
  Atom parse_label(std::string_view text) const;

  std::string atom_display(Atom a, KeyStyle style) const;

  /// The composition table in the prompt's JSON-dictionary shape:
  /// {(1, 1): [], (1, 2): [1, 2, 4, 8, 16], ...}. All arity^2 keys are
  /// emitted in code order; universal compositions render as [].
  std::string table_json(KeyStyle style) const;

  /// The indented "base elements" listing used in prompts.
  std::string base_elements_block() const;

private:
  Calculus(CalculusId id, int arity, std::vector<std::string> names,
           std::vector<std::string> word_aliases, int identity_index,
           std::vector<uint8_t> converse_index,
           std::vector<uint16_t> composition);
  void verify() const;

  CalculusId id_;
  int arity_;
  std::vector<std::string> names_;
  std::vector<std::string> word_aliases_;  // empty when same as names_
  int identity_index_;
  std::vector<uint8_t> converse_index_;
  std::vector<uint16_t> composition_;  // arity x arity bitmasks
};

/// Set-level composition: union of the atomic compositions over all pairs.
RelationSet compose(const RelationSet& a, const RelationSet& b);

/// Atom-wise converse.
RelationSet converse(const RelationSet& a);

}  // namespace qsr
