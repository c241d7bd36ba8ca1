#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cantree/error.hpp"

namespace cantree {

// An item is an API member name such as "getBounds()" or "mouseover".
// Equality is byte equality.
using Item = std::string;

// Canonical item order: case-sensitive lexicographic order of code points.
// For UTF-8 text this is plain byte order.
std::strong_ordering canonical_compare(std::string_view a, std::string_view b) noexcept;

inline bool canonical_less(std::string_view a, std::string_view b) noexcept {
  return canonical_compare(a, b) < 0;
}

// True if `name` is usable as an item: non-empty, no ';' ',' or line breaks,
// no leading or trailing whitespace.
bool is_valid_item(std::string_view name) noexcept;

struct Transaction {
  std::string id;
  std::string label;
  // Duplicate-free, in input order.
  std::vector<Item> items;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

// Returns the items of `t` deduplicated and sorted canonically.
std::vector<Item> canonicalize(const Transaction& t);
std::vector<Item> canonicalize(std::span<const Item> items);

// Ordered collection of transactions with distinct ids. Empty item sets are
// representable here (optimized databases may contain them); the parser
// rejects them on input.
class TransactionDatabase {
 public:
  TransactionDatabase() = default;

  // Appends `t`, dropping repeated items (first occurrence wins).
  // Throws DuplicateIdError or InvalidItemError.
  void add(Transaction t);

  std::size_t size() const noexcept { return transactions_.size(); }
  bool empty() const noexcept { return transactions_.empty(); }
  bool contains_id(std::string_view id) const { return ids_.contains(std::string(id)); }

  const std::vector<Transaction>& transactions() const noexcept { return transactions_; }
  auto begin() const noexcept { return transactions_.begin(); }
  auto end() const noexcept { return transactions_.end(); }
  const Transaction& operator[](std::size_t i) const { return transactions_[i]; }

  friend bool operator==(const TransactionDatabase& a, const TransactionDatabase& b) {
    return a.transactions_ == b.transactions_;
  }

 private:
  std::vector<Transaction> transactions_;
  std::unordered_set<std::string> ids_;
};

// Minimum support, either an absolute transaction count or a fraction of the
// database size. Invalid values cannot be constructed.
class MinSupport {
 public:
  static MinSupport absolute(std::uint64_t count);
  // numerator/denominator must lie in (0, 1].
  static MinSupport fraction(std::uint64_t numerator, std::uint64_t denominator);
  // Accepts "N" (absolute) or "P%" where P is a decimal number.
  static MinSupport parse(std::string_view text);

  bool is_fraction() const noexcept { return denominator_ != 0; }

  // absolute: the count itself. fraction f: ceil(f * db_size), at least 1.
  std::uint64_t resolve(std::uint64_t db_size) const noexcept;

  std::string to_string() const;

 private:
  MinSupport(std::uint64_t num, std::uint64_t den) : numerator_(num), denominator_(den) {}

  std::uint64_t numerator_;
  std::uint64_t denominator_;  // 0 for absolute
};

inline std::uint64_t resolve_min_support(const MinSupport& ms, std::uint64_t db_size) noexcept {
  return ms.resolve(db_size);
}

// Transaction CSV: `<id>,<label>,<item1;item2;...>` per line. Blank lines and
// lines starting with '#' are skipped; LF and CRLF are accepted.
TransactionDatabase parse_database(std::string_view text);
TransactionDatabase read_database_file(const std::string& path);

// Writes `db` in the same CSV format with LF line endings. Empty item sets
// produce an empty third field.
void write_database(std::ostream& out, const TransactionDatabase& db);
std::string format_database(const TransactionDatabase& db);

}  // namespace cantree
