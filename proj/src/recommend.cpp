#include "cantree/recommend.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "cantree/cantree.hpp"
#include "cantree/miner.hpp"

namespace cantree {
namespace {

std::map<Item, std::uint64_t> item_supports(const TransactionDatabase& db) {
  std::map<Item, std::uint64_t> counts;
  for (const auto& t : db)
    for (const auto& item : t.items) ++counts[item];
  return counts;
}

std::map<Item, std::uint64_t> frequent_map(const TransactionDatabase& db, const MinSupport& ms) {
  const CanTree tree = build_tree(db);
  std::map<Item, std::uint64_t> out;
  for (auto& [item, support] : frequent_items(tree, ms)) out.emplace(std::move(item), support);
  return out;
}

void sort_by(std::vector<ItemChange>& changes, std::optional<std::uint64_t> ItemChange::*support) {
  std::sort(changes.begin(), changes.end(), [support](const ItemChange& a, const ItemChange& b) {
    if (a.*support != b.*support) return *(a.*support) > *(b.*support);
    return canonical_less(a.item, b.item);
  });
}

void write_support(std::ostream& out, const std::optional<std::uint64_t>& s) {
  if (s) out << *s;
}

}  // namespace

OptimizedDatabase optimize_database(const TransactionDatabase& db, const MinSupport& ms) {
  const std::uint64_t minsup = ms.resolve(db.size());
  const auto counts = item_supports(db);
  OptimizedDatabase out;
  for (const auto& t : db) {
    Transaction projected{t.id, t.label, {}};
    for (const auto& item : t.items)
      if (counts.at(item) >= minsup) projected.items.push_back(item);
    out.add(std::move(projected));
  }
  return out;
}

RecommendationReport diff_versions(const TransactionDatabase& old_db, const TransactionDatabase& new_db,
                                   const MinSupport& ms) {
  RecommendationReport report;
  report.old_minsup = ms.resolve(old_db.size());
  report.new_minsup = ms.resolve(new_db.size());
  const auto old_frequent = frequent_map(old_db, ms);
  const auto new_frequent = frequent_map(new_db, ms);

  for (const auto& [item, support] : old_frequent) {
    if (auto it = new_frequent.find(item); it != new_frequent.end())
      report.retained.push_back({item, support, it->second});
    else
      report.dropped.push_back({item, support, std::nullopt});
  }
  for (const auto& [item, support] : new_frequent)
    if (!old_frequent.contains(item)) report.added.push_back({item, std::nullopt, support});

  sort_by(report.retained, &ItemChange::new_support);
  sort_by(report.dropped, &ItemChange::old_support);
  sort_by(report.added, &ItemChange::new_support);
  return report;
}

std::string_view to_string(Annotation a) noexcept {
  return a == Annotation::kRetained ? "retained" : "new-in-version";
}

std::vector<Recommendation> recommend_items(const RecommendationReport& report, std::size_t k) {
  std::vector<Recommendation> all;
  for (const auto& c : report.retained) all.push_back({c.item, Annotation::kRetained, *c.new_support});
  for (const auto& c : report.added) all.push_back({c.item, Annotation::kNewInVersion, *c.new_support});
  std::sort(all.begin(), all.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.support != b.support) return a.support > b.support;
    return canonical_less(a.item, b.item);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

void write_report_text(std::ostream& out, const RecommendationReport& report) {
  out << "minimum support: old " << report.old_minsup << ", new " << report.new_minsup << '\n';
  out << "\nretained (" << report.retained.size() << "):\n";
  for (const auto& c : report.retained)
    out << "  " << c.item << "  " << *c.old_support << " -> " << *c.new_support << '\n';
  out << "\ndropped (" << report.dropped.size() << "):\n";
  for (const auto& c : report.dropped) out << "  " << c.item << "  " << *c.old_support << '\n';
  out << "\nadded (" << report.added.size() << "):\n";
  for (const auto& c : report.added) out << "  " << c.item << "  " << *c.new_support << '\n';
}

void write_report_csv(std::ostream& out, const RecommendationReport& report) {
  out << "item,status,old_support,new_support\n";
  const auto rows = [&out](const std::vector<ItemChange>& changes, std::string_view status) {
    for (const auto& c : changes) {
      out << c.item << ',' << status << ',';
      write_support(out, c.old_support);
      out << ',';
      write_support(out, c.new_support);
      out << '\n';
    }
  };
  rows(report.retained, "retained");
  rows(report.dropped, "dropped");
  rows(report.added, "added");
}

void write_recommendations_csv(std::ostream& out, const std::vector<Recommendation>& recs) {
  out << "item,annotation,support\n";
  for (const auto& r : recs) out << r.item << ',' << to_string(r.annotation) << ',' << r.support << '\n';
}

}  // namespace cantree
