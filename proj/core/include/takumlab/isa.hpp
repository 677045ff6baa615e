#pragma once

#include <cstdint>
#include <map>
#include <regex>
#include <string>
#include <unordered_set>
#include <vector>

namespace takumlab {

enum class IsaCategory : std::uint8_t {
  Bitwise,
  Mask,
  Integer,
  FloatingPoint,
  Cryptographic,
};

std::string category_name(IsaCategory c);

/// Expands a finite pattern (literals over [A-Z0-9], grouping, alternation
/// and optionality) into its complete language, sorted and deduplicated.
/// Star/plus and any other unbounded operator raise DataError.
std::vector<std::string> expand_pattern(const std::string& pattern);

/// One ordered rewrite step: a full-match regex over the legacy mnemonic
/// and the proposed replacement templates (${n} capture references).
/// Several templates mean the instruction generalizes to several proposed
/// mnemonics; none (a drop rule) means the instruction is removed, with
/// the recorded reason.
struct RewriteRule {
  std::string pattern;
  std::regex compiled;
  std::vector<std::string> templates;
  std::string drop_reason;
};

struct GroupDef {
  std::string id;  // e.g. "B01", "F07"
  IsaCategory category = IsaCategory::Bitwise;
  std::string legacy_pattern;
  std::string proposed_pattern;
  std::vector<std::string> legacy_language;    // expanded, sorted
  std::vector<std::string> proposed_language;  // expanded, sorted
  std::vector<RewriteRule> rules;
};

struct Classification {
  const GroupDef* group = nullptr;
  bool proposed = false;  // matched the proposed side of the table
};

struct RewriteResult {
  std::vector<std::string> proposed;  // sorted; empty for removed instructions
  std::string drop_reason;            // set when proposed is empty by rule
};

struct CategoryCounts {
  std::size_t total = 0;
  std::map<IsaCategory, std::size_t> per_category;
};

struct DiffEntry {
  std::string kind;  // unchanged | renamed | removed | added
  std::string mnemonic;
  std::string detail;
};

/// The shipped instruction tables: group definitions (classification
/// patterns, proposed patterns, rewrite rules) plus the curated legacy
/// instruction list. Loading validates the partition property: every
/// listed mnemonic matches exactly one legacy group pattern.
class IsaTables {
 public:
  static IsaTables load(const std::string& groups_path,
                        const std::string& legacy_list_path);

  const std::vector<GroupDef>& groups() const { return groups_; }
  const GroupDef& group(const std::string& id) const;
  const std::vector<std::string>& legacy_list() const { return legacy_; }

  /// Unique matching group. Tries the legacy patterns, then the proposed
  /// ones. No match raises DataError listing the nearest patterns;
  /// several legacy matches raise a table-integrity DataError.
  Classification classify(const std::string& mnemonic) const;

  /// Proposed image of a mnemonic. Proposed mnemonics map to themselves.
  RewriteResult rewrite(const std::string& mnemonic) const;

  /// Counts over the shipped legacy list.
  CategoryCounts legacy_counts() const;

  /// Union of every group's proposed language, sorted and deduplicated.
  std::vector<std::string> enumerate_proposed() const;

  /// Legacy-vs-proposed comparison: renamed and removed legacy
  /// instructions, plus proposed instructions no legacy mnemonic maps to
  /// (the generalized additions).
  std::vector<DiffEntry> diff() const;

 private:
  std::vector<GroupDef> groups_;
  std::vector<std::string> legacy_;
  std::vector<std::unordered_set<std::string>> legacy_sets_;
  std::vector<std::unordered_set<std::string>> proposed_sets_;

  void build_sets_and_validate();
};

void write_classification_csv(std::ostream& os, const IsaTables& tables);
void write_diff_csv(std::ostream& os, const std::vector<DiffEntry>& diff);
void write_diff_text(std::ostream& os, const std::vector<DiffEntry>& diff);

}  // namespace takumlab
