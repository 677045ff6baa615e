#include "takumlab/isa.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "takumlab/errors.hpp"

namespace takumlab {

std::string category_name(IsaCategory c) {
  switch (c) {
    case IsaCategory::Bitwise: return "bitwise";
    case IsaCategory::Mask: return "mask";
    case IsaCategory::Integer: return "integer";
    case IsaCategory::FloatingPoint: return "floating_point";
    case IsaCategory::Cryptographic: return "cryptographic";
  }
  return "?";
}

namespace {

IsaCategory parse_category(const std::string& s) {
  if (s == "bitwise") return IsaCategory::Bitwise;
  if (s == "mask") return IsaCategory::Mask;
  if (s == "integer") return IsaCategory::Integer;
  if (s == "floating_point") return IsaCategory::FloatingPoint;
  if (s == "cryptographic") return IsaCategory::Cryptographic;
  throw DataError("unknown instruction category: " + s);
}

constexpr std::size_t kLanguageCap = 1 << 20;

// Recursive-descent expansion of the finite pattern grammar:
//   alt := seq ('|' seq)* ; seq := term* ; term := atom '?'? ;
//   atom := literal | '(' alt ')'
struct PatternParser {
  const std::string& src;
  std::size_t pos = 0;

  explicit PatternParser(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "pattern '" << src << "' at offset " << pos << ": " << msg;
    throw DataError(os.str());
  }

  bool at_end() const { return pos >= src.size(); }
  char peek() const { return src[pos]; }

  std::vector<std::string> parse_alt() {
    std::vector<std::string> lang = parse_seq();
    while (!at_end() && peek() == '|') {
      ++pos;
      auto rhs = parse_seq();
      lang.insert(lang.end(), rhs.begin(), rhs.end());
      if (lang.size() > kLanguageCap) fail("language too large");
    }
    return lang;
  }

  std::vector<std::string> parse_seq() {
    std::vector<std::string> lang{""};
    while (!at_end() && peek() != '|' && peek() != ')') {
      std::vector<std::string> atom;
      if (peek() == '(') {
        ++pos;
        atom = parse_alt();
        if (at_end() || peek() != ')') fail("missing ')'");
        ++pos;
      } else if (peek() == '*' || peek() == '+') {
        fail("unbounded repetition is not supported");
      } else if (peek() == '?') {
        fail("dangling '?'");
      } else if ((peek() >= 'A' && peek() <= 'Z') || (peek() >= '0' && peek() <= '9')) {
        atom.push_back(std::string(1, peek()));
        ++pos;
      } else {
        fail(std::string("unsupported character '") + peek() + "'");
      }
      if (!at_end() && peek() == '?') {
        ++pos;
        atom.push_back("");
      }
      std::vector<std::string> next;
      next.reserve(lang.size() * atom.size());
      for (const std::string& a : lang)
        for (const std::string& b : atom) next.push_back(a + b);
      if (next.size() > kLanguageCap) fail("language too large");
      lang = std::move(next);
    }
    return lang;
  }
};

std::string apply_template(const std::string& tmpl, const std::smatch& m) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '$' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      std::size_t close = tmpl.find('}', i + 2);
      if (close == std::string::npos)
        throw DataError("rewrite template missing '}': " + tmpl);
      int idx = std::stoi(tmpl.substr(i + 2, close - i - 2));
      if (idx < 0 || idx >= static_cast<int>(m.size()))
        throw DataError("rewrite template capture out of range: " + tmpl);
      out += m[static_cast<std::size_t>(idx)].str();
      i = close;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> expand_pattern(const std::string& pattern) {
  PatternParser p(pattern);
  std::vector<std::string> lang = p.parse_alt();
  if (!p.at_end()) p.fail("unbalanced ')'");
  std::sort(lang.begin(), lang.end());
  lang.erase(std::unique(lang.begin(), lang.end()), lang.end());
  return lang;
}

IsaTables IsaTables::load(const std::string& groups_path,
                          const std::string& legacy_list_path) {
  std::ifstream gin(groups_path);
  if (!gin) throw DataError("cannot open group table: " + groups_path);

  IsaTables t;
  GroupDef current;
  bool in_group = false;
  std::map<std::string, std::string> same_as;  // group id -> source id
  std::string line;
  std::size_t lineno = 0;

  auto finish_group = [&] {
    if (current.id.empty()) throw DataError("group record without an id");
    if (current.legacy_pattern.empty())
      throw DataError("group " + current.id + " has no legacy pattern");
    current.legacy_language = expand_pattern(current.legacy_pattern);
    if (!current.proposed_pattern.empty())
      current.proposed_language = expand_pattern(current.proposed_pattern);
    t.groups_.push_back(std::move(current));
    current = GroupDef{};
  };

  while (std::getline(gin, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream is(s);
    std::string key;
    is >> key;
    std::string rest = trim(s.substr(key.size()));
    if (key == "group") {
      if (in_group) throw DataError("nested group at line " + std::to_string(lineno));
      in_group = true;
      current.id = rest;
    } else if (!in_group) {
      throw DataError("directive outside a group at line " + std::to_string(lineno));
    } else if (key == "category") {
      current.category = parse_category(rest);
    } else if (key == "legacy") {
      current.legacy_pattern = rest;
    } else if (key == "proposed") {
      current.proposed_pattern = rest;
    } else if (key == "proposed-same-as") {
      same_as[current.id] = rest;
    } else if (key == "rewrite" || key == "drop") {
      // rewrite <regex> -> tmpl[|tmpl...]      drop <regex> -- reason
      const std::string sep = key == "rewrite" ? " -> " : " -- ";
      std::size_t at = rest.find(sep);
      if (at == std::string::npos)
        throw DataError("malformed rule at line " + std::to_string(lineno));
      RewriteRule rule;
      rule.pattern = trim(rest.substr(0, at));
      std::string rhs = trim(rest.substr(at + sep.size()));
      try {
        rule.compiled = std::regex(rule.pattern, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw DataError("bad rule regex '" + rule.pattern + "': " + e.what());
      }
      if (key == "rewrite") {
        std::istringstream ts(rhs);
        std::string tmpl;
        while (std::getline(ts, tmpl, '|')) {
          tmpl = trim(tmpl);
          if (!tmpl.empty()) rule.templates.push_back(tmpl);
        }
        if (rule.templates.empty())
          throw DataError("rewrite rule without templates at line " +
                          std::to_string(lineno));
      } else {
        rule.drop_reason = rhs;
      }
      current.rules.push_back(std::move(rule));
    } else if (key == "end") {
      finish_group();
      in_group = false;
    } else {
      throw DataError("unknown directive '" + key + "' at line " +
                      std::to_string(lineno));
    }
  }
  if (in_group) throw DataError("unterminated group record");

  for (auto& [id, src] : same_as) {
    const GroupDef& source = t.group(src);
    for (GroupDef& g : t.groups_)
      if (g.id == id) {
        g.proposed_pattern = source.proposed_pattern;
        g.proposed_language = source.proposed_language;
      }
  }

  std::ifstream lin(legacy_list_path);
  if (!lin) throw DataError("cannot open legacy list: " + legacy_list_path);
  while (std::getline(lin, line)) {
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    for (char c : s)
      if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')))
        throw DataError("legacy list: invalid mnemonic '" + s + "'");
    t.legacy_.push_back(s);
  }
  if (t.legacy_.empty()) throw DataError("legacy list is empty");

  t.build_sets_and_validate();
  return t;
}

void IsaTables::build_sets_and_validate() {
  legacy_sets_.clear();
  proposed_sets_.clear();
  for (const GroupDef& g : groups_) {
    legacy_sets_.emplace_back(g.legacy_language.begin(), g.legacy_language.end());
    proposed_sets_.emplace_back(g.proposed_language.begin(),
                                g.proposed_language.end());
  }
  std::unordered_set<std::string> seen;
  for (const std::string& m : legacy_) {
    if (!seen.insert(m).second)
      throw DataError("legacy list: duplicate mnemonic " + m);
    classify(m);  // throws on zero or multiple matches
  }
}

const GroupDef& IsaTables::group(const std::string& id) const {
  for (const GroupDef& g : groups_)
    if (g.id == id) return g;
  throw DataError("unknown group id: " + id);
}

Classification IsaTables::classify(const std::string& mnemonic) const {
  const GroupDef* match = nullptr;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (legacy_sets_[i].count(mnemonic)) {
      if (match)
        throw DataError("table integrity: " + mnemonic + " matches both " +
                        match->id + " and " + groups_[i].id);
      match = &groups_[i];
    }
  }
  if (match) return {match, false};

  for (std::size_t i = 0; i < groups_.size(); ++i)
    if (proposed_sets_[i].count(mnemonic)) return {&groups_[i], true};

  // Unclassified: offer the nearest patterns by edit distance.
  struct Near {
    std::size_t dist;
    const GroupDef* group;
    std::string closest;
  };
  std::vector<Near> near;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    Near n{std::string::npos, &groups_[i], ""};
    for (const std::string& cand : groups_[i].legacy_language) {
      std::size_t d = edit_distance(mnemonic, cand);
      if (d < n.dist) {
        n.dist = d;
        n.closest = cand;
      }
    }
    if (!n.closest.empty()) near.push_back(n);
  }
  std::sort(near.begin(), near.end(),
            [](const Near& a, const Near& b) { return a.dist < b.dist; });
  std::ostringstream os;
  os << "unclassified mnemonic '" << mnemonic << "'; nearest patterns:";
  for (std::size_t i = 0; i < near.size() && i < 3; ++i)
    os << ' ' << near[i].group->id << " (e.g. " << near[i].closest << ")";
  throw DataError(os.str());
}

RewriteResult IsaTables::rewrite(const std::string& mnemonic) const {
  // A proposed mnemonic is already in the target nomenclature.
  bool in_legacy = false;
  for (const auto& set : legacy_sets_)
    if (set.count(mnemonic)) {
      in_legacy = true;
      break;
    }
  if (!in_legacy) {
    for (const auto& set : proposed_sets_)
      if (set.count(mnemonic)) return {{mnemonic}, ""};
  }

  Classification c = classify(mnemonic);
  if (c.proposed) return {{mnemonic}, ""};
  for (const RewriteRule& rule : c.group->rules) {
    std::smatch m;
    if (!std::regex_match(mnemonic, m, rule.compiled)) continue;
    if (rule.templates.empty()) return {{}, rule.drop_reason};
    RewriteResult out;
    for (const std::string& tmpl : rule.templates)
      out.proposed.push_back(apply_template(tmpl, m));
    std::sort(out.proposed.begin(), out.proposed.end());
    out.proposed.erase(std::unique(out.proposed.begin(), out.proposed.end()),
                       out.proposed.end());
    return out;
  }
  throw DataError("group " + c.group->id + " has no rewrite rule for " + mnemonic);
}

CategoryCounts IsaTables::legacy_counts() const {
  CategoryCounts counts;
  counts.total = legacy_.size();
  for (const std::string& m : legacy_) {
    Classification c = classify(m);
    ++counts.per_category[c.group->category];
  }
  return counts;
}

std::vector<std::string> IsaTables::enumerate_proposed() const {
  std::vector<std::string> all;
  for (const GroupDef& g : groups_)
    all.insert(all.end(), g.proposed_language.begin(), g.proposed_language.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

std::vector<DiffEntry> IsaTables::diff() const {
  std::vector<DiffEntry> out;
  std::unordered_set<std::string> image;
  std::vector<std::string> sorted_legacy = legacy_;
  std::sort(sorted_legacy.begin(), sorted_legacy.end());
  for (const std::string& m : sorted_legacy) {
    RewriteResult r = rewrite(m);
    for (const std::string& p : r.proposed) image.insert(p);
    if (r.proposed.empty()) {
      out.push_back({"removed", m, r.drop_reason});
    } else if (r.proposed.size() == 1 && r.proposed[0] == m) {
      out.push_back({"unchanged", m, ""});
    } else {
      std::string detail;
      for (const std::string& p : r.proposed) {
        if (!detail.empty()) detail += ';';
        detail += p;
      }
      out.push_back({"renamed", m, detail});
    }
  }
  for (const std::string& p : enumerate_proposed())
    if (!image.count(p)) out.push_back({"added", p, "generalized width"});
  return out;
}

void write_classification_csv(std::ostream& os, const IsaTables& tables) {
  os << "mnemonic,group,category\n";
  for (const std::string& m : tables.legacy_list()) {
    Classification c = tables.classify(m);
    os << m << ',' << c.group->id << ',' << category_name(c.group->category)
       << '\n';
  }
}

void write_diff_csv(std::ostream& os, const std::vector<DiffEntry>& diff) {
  os << "kind,mnemonic,detail\n";
  for (const DiffEntry& e : diff)
    os << e.kind << ',' << e.mnemonic << ',' << e.detail << '\n';
}

void write_diff_text(std::ostream& os, const std::vector<DiffEntry>& diff) {
  std::size_t unchanged = 0, renamed = 0, removed = 0, added = 0;
  for (const DiffEntry& e : diff) {
    if (e.kind == "unchanged") ++unchanged;
    else if (e.kind == "renamed") ++renamed;
    else if (e.kind == "removed") ++removed;
    else ++added;
  }
  os << "instruction set diff: " << unchanged << " unchanged, " << renamed
     << " renamed, " << removed << " removed, " << added
     << " added by generalization\n";
  for (const DiffEntry& e : diff) {
    if (e.kind == "unchanged") continue;
    os << "  " << e.kind << ' ' << e.mnemonic;
    if (!e.detail.empty()) os << " (" << e.detail << ")";
    os << '\n';
  }
}

}  // namespace takumlab
