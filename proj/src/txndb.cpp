#include "cantree/txndb.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cantree {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_u64(std::string_view s, std::uint64_t& value) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::strong_ordering canonical_compare(std::string_view a, std::string_view b) noexcept {
  // char_traits<char>::compare orders as unsigned char, which for UTF-8 is
  // code-point order.
  const int c = a.compare(b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool is_valid_item(std::string_view name) noexcept {
  if (name.empty()) return false;
  if (is_space(name.front()) || is_space(name.back())) return false;
  return name.find_first_of(";,\n\r") == std::string_view::npos;
}

std::vector<Item> canonicalize(std::span<const Item> items) {
  std::vector<Item> out(items.begin(), items.end());
  std::sort(out.begin(), out.end(), canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Item> canonicalize(const Transaction& t) { return canonicalize(std::span<const Item>(t.items)); }

void TransactionDatabase::add(Transaction t) {
  if (t.id.empty() || t.id.find_first_of(",\n\r") != std::string::npos)
    throw InvalidItemError("invalid transaction id '" + t.id + "'");
  if (t.label.find_first_of(",\n\r") != std::string::npos)
    throw InvalidItemError("invalid transaction label '" + t.label + "'");
  if (ids_.contains(t.id)) throw DuplicateIdError("duplicate transaction id '" + t.id + "'");
  std::vector<Item> unique;
  unique.reserve(t.items.size());
  std::unordered_set<std::string_view> seen;
  for (auto& item : t.items) {
    if (!is_valid_item(item)) throw InvalidItemError("invalid item name '" + item + "'");
    if (seen.insert(item).second) unique.push_back(item);
  }
  t.items = std::move(unique);
  ids_.insert(t.id);
  transactions_.push_back(std::move(t));
}

MinSupport MinSupport::absolute(std::uint64_t count) {
  if (count < 1) throw InvalidMinSupportError("minimum support count must be at least 1");
  return MinSupport(count, 0);
}

MinSupport MinSupport::fraction(std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0 || numerator == 0 || numerator > denominator)
    throw InvalidMinSupportError("minimum support fraction must lie in (0, 1]");
  const std::uint64_t g = std::gcd(numerator, denominator);
  return MinSupport(numerator / g, denominator / g);
}

MinSupport MinSupport::parse(std::string_view text) {
  const std::string_view s = trim(text);
  const auto invalid = [&] {
    return InvalidMinSupportError("invalid minimum support '" + std::string(text) +
                                  "' (expected N or P%)");
  };
  if (s.empty()) throw invalid();
  if (s.back() != '%') {
    std::uint64_t count = 0;
    if (!parse_u64(s, count)) throw invalid();
    return absolute(count);
  }

  const std::string_view number = s.substr(0, s.size() - 1);
  const std::size_t dot = number.find('.');
  const std::string_view whole = number.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : number.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw invalid();
  if (dot != std::string_view::npos && frac.empty()) throw invalid();
  if (whole.size() + frac.size() > 17) throw invalid();
  std::string digits(whole);
  digits += frac;
  std::uint64_t numerator = 0;
  if (!parse_u64(digits, numerator)) throw invalid();
  std::uint64_t denominator = 100;
  for (std::size_t i = 0; i < frac.size(); ++i) denominator *= 10;
  return fraction(numerator, denominator);
}

std::uint64_t MinSupport::resolve(std::uint64_t db_size) const noexcept {
  if (!is_fraction()) return numerator_;
  const auto product = static_cast<unsigned __int128>(numerator_) * db_size;
  const auto ceil = (product + denominator_ - 1) / denominator_;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ceil));
}

std::string MinSupport::to_string() const {
  if (!is_fraction()) return std::to_string(numerator_);
  return std::to_string(numerator_) + "/" + std::to_string(denominator_);
}

TransactionDatabase parse_database(std::string_view text) {
  TransactionDatabase db;
  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split(line, ',');
    if (fields.size() != 3)
      throw ParseError(line_no, "expected 3 comma-separated fields, found " + std::to_string(fields.size()));
    Transaction t;
    t.id = std::string(trim(fields[0]));
    t.label = std::string(trim(fields[1]));
    if (t.id.empty()) throw ParseError(line_no, "empty transaction id");
    for (std::string_view item : split(fields[2], ';')) {
      item = trim(item);
      if (!item.empty()) t.items.emplace_back(item);
    }
    if (t.items.empty())
      throw EmptyTransactionError("line " + std::to_string(line_no) + ": transaction '" + t.id + "' has no items");
    try {
      db.add(std::move(t));
    } catch (const DuplicateIdError& e) {
      throw DuplicateIdError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return db;
}

TransactionDatabase read_database_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_database(buffer.str());
}

void write_database(std::ostream& out, const TransactionDatabase& db) {
  for (const auto& t : db) {
    out << t.id << ',' << t.label << ',';
    for (std::size_t i = 0; i < t.items.size(); ++i) {
      if (i) out << ';';
      out << t.items[i];
    }
    out << '\n';
  }
}

std::string format_database(const TransactionDatabase& db) {
  std::ostringstream out;
  write_database(out, db);
  return out.str();
}

}  // namespace cantree
