#include "lmrank/lexicon.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "lmrank/errors.hpp"
#include "lmrank/unicode.hpp"

namespace lmrank {

namespace {

const std::vector<LexiconEntry> kNoEntries;

// Shortest decimal form that parses back to the same double, so weights
// survive a save/load round trip exactly.
std::string format_weight(double w) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, ptr);
}

bool has_whitespace_cp(std::string_view utf8) {
  for (char32_t cp : unicode::decode_utf8(utf8))
    if (unicode::is_whitespace(cp)) return true;
  return false;
}

// Lexicon fields are single words under the corpus module's normalization.
std::string normalize_word(std::string_view raw, const std::string& context,
                           std::string_view role) {
  if (raw.empty())
    throw ParseError(context + ": empty " + std::string(role) + " field");
  std::string word;
  try {
    word = unicode::to_nfc(raw);
  } catch (const ParseError& e) {
    throw ParseError(context + ": " + e.what());
  }
  if (has_whitespace_cp(word))
    throw ParseError(context + ": " + std::string(role) + " \"" + word +
                     "\" must be a single word without whitespace");
  return word;
}

}  // namespace

void ParallelLexicon::add(std::string_view source, std::string_view target,
                          std::optional<double> weight) {
  if (source.empty() || target.empty())
    throw DataError("lexicon entries must have non-empty source and target");
  auto [it, inserted] = entries_.try_emplace(std::string(source));
  if (inserted) source_order_.push_back(std::string(source));
  for (const LexiconEntry& e : it->second)
    if (e.target == target) return;  // duplicate pair, first one wins
  it->second.push_back(LexiconEntry{std::string(target), weight});
  ++pair_count_;
}

const std::vector<LexiconEntry>& ParallelLexicon::lookup(std::string_view source_word) const {
  const auto it = entries_.find(std::string(source_word));
  return it == entries_.end() ? kNoEntries : it->second;
}

bool operator==(const ParallelLexicon& a, const ParallelLexicon& b) {
  return a.source_language_ == b.source_language_ && a.target_language_ == b.target_language_ &&
         a.source_order_ == b.source_order_ && a.entries_ == b.entries_;
}

ParallelLexicon load_lexicon(std::istream& in, std::string_view source_name,
                             std::string source_language, std::string target_language) {
  ParallelLexicon lex(std::move(source_language), std::move(target_language));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string context = std::string(source_name) + ":" + std::to_string(line_no);

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(std::string_view(line).substr(start));
        break;
      }
      fields.push_back(std::string_view(line).substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(context + ": expected source<TAB>target[<TAB>weight], got " +
                       std::to_string(fields.size()) + " fields");

    const std::string source = normalize_word(fields[0], context, "source word");
    const std::string target = normalize_word(fields[1], context, "target word");
    std::optional<double> weight;
    if (fields.size() == 3) {
      if (fields[2].empty()) throw ParseError(context + ": empty weight field");
      try {
        std::size_t pos = 0;
        weight = std::stod(std::string(fields[2]), &pos);
        if (pos != fields[2].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ParseError(context + ": unparsable weight \"" + std::string(fields[2]) + "\"");
      }
    }
    lex.add(source, target, weight);
  }
  return lex;
}

ParallelLexicon load_lexicon_file(const std::filesystem::path& path, std::string source_language,
                                  std::string target_language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open lexicon file: " + path.string());
  return load_lexicon(in, path.string(), std::move(source_language), std::move(target_language));
}

void save_lexicon(const ParallelLexicon& lex, std::ostream& out) {
  for (const std::string& source : lex.sources()) {
    for (const LexiconEntry& entry : lex.lookup(source)) {
      out << source << '\t' << entry.target;
      if (entry.weight) out << '\t' << format_weight(*entry.weight);
      out << '\n';
    }
  }
}

std::vector<std::string> project(const ParallelLexicon& lex, const std::vector<Ngram>& retained) {
  std::vector<std::string> registered;
  std::unordered_set<std::string> seen;
  for (const Ngram& g : retained) {
    for (const std::string& word : g.words()) {
      for (const LexiconEntry& entry : lex.lookup(word)) {
        if (seen.insert(entry.target).second) registered.push_back(entry.target);
      }
    }
  }
  return registered;
}

}  // namespace lmrank
