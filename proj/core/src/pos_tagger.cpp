// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

// Lexicon-then-suffix POS tagger. The lexicon pins the closed classes
// (which suffix rules would otherwise mangle: "is" is not a plural) plus
// frequent open-class words; everything else falls through suffix rules to
// the NN default. Tags are Penn Treebank.

#include <string_view>
#include <unordered_map>

#include "relarec/text_pipeline.hpp"

namespace relarec {

namespace {

struct LexEntry {
  const char* word;
  const char* tag;
};

// clang-format off
constexpr LexEntry kLexicon[] = {
    // determiners & quantifiers
    {"a", "DT"}, {"an", "DT"}, {"the", "DT"}, {"this", "DT"}, {"these", "DT"},
    {"those", "DT"}, {"each", "DT"}, {"every", "DT"}, {"either", "DT"},
    {"neither", "DT"}, {"some", "DT"}, {"any", "DT"}, {"all", "DT"},
    {"both", "DT"}, {"another", "DT"}, {"no", "DT"}, {"such", "JJ"},
    // prepositions & subordinating conjunctions
    {"of", "IN"}, {"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"by", "IN"},
    {"for", "IN"}, {"with", "IN"}, {"from", "IN"}, {"into", "IN"},
    {"onto", "IN"}, {"upon", "IN"}, {"about", "IN"}, {"against", "IN"},
    {"between", "IN"}, {"among", "IN"}, {"through", "IN"}, {"during", "IN"},
    {"before", "IN"}, {"after", "IN"}, {"above", "IN"}, {"below", "IN"},
    {"under", "IN"}, {"over", "IN"}, {"without", "IN"}, {"within", "IN"},
    {"along", "IN"}, {"across", "IN"}, {"behind", "IN"}, {"beyond", "IN"},
    {"near", "IN"}, {"since", "IN"}, {"until", "IN"}, {"than", "IN"},
    {"as", "IN"}, {"per", "IN"}, {"via", "IN"}, {"toward", "IN"},
    {"towards", "IN"}, {"despite", "IN"}, {"unless", "IN"},
    {"although", "IN"}, {"because", "IN"}, {"while", "IN"},
    {"whereas", "IN"}, {"if", "IN"}, {"though", "IN"}, {"that", "IN"},
    {"whether", "IN"},
    // coordinating conjunctions
    {"and", "CC"}, {"or", "CC"}, {"but", "CC"}, {"nor", "CC"}, {"plus", "CC"},
    // particles and misc closed class
    {"to", "TO"}, {"there", "EX"}, {"not", "RB"},
    // modals
    {"can", "MD"}, {"could", "MD"}, {"may", "MD"}, {"might", "MD"},
    {"must", "MD"}, {"shall", "MD"}, {"should", "MD"}, {"will", "MD"},
    {"would", "MD"},
    // pronouns
    {"i", "PRP"}, {"you", "PRP"}, {"he", "PRP"}, {"she", "PRP"},
    {"it", "PRP"}, {"we", "PRP"}, {"they", "PRP"}, {"me", "PRP"},
    {"him", "PRP"}, {"us", "PRP"}, {"them", "PRP"}, {"itself", "PRP"},
    {"themselves", "PRP"}, {"my", "PRP$"}, {"your", "PRP$"}, {"his", "PRP$"},
    {"her", "PRP$"}, {"its", "PRP$"}, {"our", "PRP$"}, {"their", "PRP$"},
    // wh-words
    {"which", "WDT"}, {"what", "WDT"}, {"who", "WP"}, {"whom", "WP"},
    {"whose", "WP$"}, {"when", "WRB"}, {"where", "WRB"}, {"why", "WRB"},
    {"how", "WRB"},
    // be / have / do
    {"be", "VB"}, {"am", "VBP"}, {"is", "VBZ"}, {"are", "VBP"},
    {"was", "VBD"}, {"were", "VBD"}, {"been", "VBN"}, {"being", "VBG"},
    {"have", "VBP"}, {"has", "VBZ"}, {"had", "VBD"}, {"having", "VBG"},
    {"do", "VBP"}, {"does", "VBZ"}, {"did", "VBD"}, {"done", "VBN"},
    {"doing", "VBG"},
    // frequent verbs (base form)
    {"use", "VB"}, {"show", "VB"}, {"find", "VB"}, {"make", "VB"},
    {"take", "VB"}, {"give", "VB"}, {"propose", "VB"}, {"present", "VB"},
    {"describe", "VB"}, {"evaluate", "VB"}, {"compare", "VB"},
    {"improve", "VB"}, {"increase", "VB"}, {"reduce", "VB"},
    {"achieve", "VB"}, {"require", "VB"}, {"include", "VB"},
    {"contain", "VB"}, {"consider", "VB"}, {"perform", "VB"},
    {"apply", "VB"}, {"develop", "VB"}, {"design", "VB"}, {"provide", "VB"},
    {"demonstrate", "VB"}, {"investigate", "VB"}, {"analyze", "VB"},
    {"introduce", "VB"}, {"obtain", "VB"}, {"derive", "VB"},
    {"observe", "VB"}, {"examine", "VB"}, {"explore", "VB"},
    {"become", "VB"}, {"remain", "VB"}, {"outperform", "VB"},
    // adverbs
    {"very", "RB"}, {"also", "RB"}, {"only", "RB"}, {"just", "RB"},
    {"even", "RB"}, {"still", "RB"}, {"never", "RB"}, {"always", "RB"},
    {"often", "RB"}, {"sometimes", "RB"}, {"usually", "RB"},
    {"however", "RB"}, {"moreover", "RB"}, {"furthermore", "RB"},
    {"therefore", "RB"}, {"thus", "RB"}, {"hence", "RB"}, {"rather", "RB"},
    {"quite", "RB"}, {"too", "RB"}, {"well", "RB"}, {"almost", "RB"},
    {"already", "RB"}, {"yet", "RB"}, {"here", "RB"}, {"now", "RB"},
    {"then", "RB"}, {"more", "RBR"}, {"most", "RBS"}, {"less", "RBR"},
    {"least", "RBS"}, {"further", "RB"},
    // numbers
    {"zero", "CD"}, {"one", "CD"}, {"two", "CD"}, {"three", "CD"},
    {"four", "CD"}, {"five", "CD"}, {"six", "CD"}, {"seven", "CD"},
    {"eight", "CD"}, {"nine", "CD"}, {"ten", "CD"}, {"eleven", "CD"},
    {"twelve", "CD"}, {"twenty", "CD"}, {"hundred", "CD"},
    {"thousand", "CD"}, {"million", "CD"}, {"billion", "CD"},
    // frequent adjectives
    {"good", "JJ"}, {"new", "JJ"}, {"first", "JJ"}, {"last", "JJ"},
    {"long", "JJ"}, {"great", "JJ"}, {"little", "JJ"}, {"own", "JJ"},
    {"other", "JJ"}, {"old", "JJ"}, {"right", "JJ"}, {"big", "JJ"},
    {"high", "JJ"}, {"low", "JJ"}, {"small", "JJ"}, {"large", "JJ"},
    {"next", "JJ"}, {"early", "JJ"}, {"late", "JJ"}, {"young", "JJ"},
    {"important", "JJ"}, {"public", "JJ"}, {"bad", "JJ"}, {"same", "JJ"},
    {"able", "JJ"}, {"best", "JJS"}, {"worst", "JJS"}, {"better", "JJR"},
    {"larger", "JJR"}, {"smaller", "JJR"}, {"higher", "JJR"},
    {"lower", "JJR"}, {"quantitative", "JJ"}, {"qualitative", "JJ"},
    {"novel", "JJ"}, {"significant", "JJ"}, {"relevant", "JJ"},
    {"related", "JJ"}, {"similar", "JJ"}, {"different", "JJ"},
    {"several", "JJ"}, {"many", "JJ"}, {"much", "JJ"}, {"few", "JJ"},
    {"effective", "JJ"}, {"efficient", "JJ"}, {"robust", "JJ"},
    {"optimal", "JJ"}, {"digital", "JJ"}, {"academic", "JJ"},
    {"scientific", "JJ"}, {"online", "JJ"}, {"main", "JJ"},
    {"common", "JJ"}, {"general", "JJ"}, {"specific", "JJ"},
    {"current", "JJ"}, {"previous", "JJ"}, {"recent", "JJ"},
    {"former", "JJ"}, {"latter", "JJ"}, {"various", "JJ"},
    {"possible", "JJ"}, {"available", "JJ"}, {"simple", "JJ"},
    {"complex", "JJ"}, {"standard", "JJ"}, {"multiple", "JJ"},
    {"statistical", "JJ"}, {"semantic", "JJ"}, {"linear", "JJ"},
    {"neural", "JJ"}, {"deep", "JJ"}, {"dense", "JJ"}, {"sparse", "JJ"},
    // frequent nouns (incl. the domain vocabulary of scholarly text)
    {"research", "NN"}, {"paper", "NN"}, {"study", "NN"},
    {"performance", "NN"}, {"system", "NNS"}, {"recommender", "NN"},
    {"recommendation", "NN"}, {"algorithm", "NN"}, {"approach", "NN"},
    {"method", "NN"}, {"model", "NN"}, {"analysis", "NN"},
    {"result", "NN"}, {"evaluation", "NN"}, {"experiment", "NN"},
    {"user", "NN"}, {"document", "NN"}, {"library", "NN"},
    {"information", "NN"}, {"retrieval", "NN"}, {"science", "NN"},
    {"article", "NN"}, {"abstract", "NN"}, {"title", "NN"},
    {"author", "NN"}, {"word", "NN"}, {"term", "NN"}, {"index", "NN"},
    {"corpus", "NN"}, {"embedding", "NN"}, {"vector", "NN"},
    {"similarity", "NN"}, {"ranking", "NN"}, {"click", "NN"},
    {"rate", "NN"}, {"test", "NN"}, {"effect", "NN"}, {"impact", "NN"},
    {"work", "NN"}, {"field", "NN"}, {"domain", "NN"}, {"context", "NN"},
    {"content", "NN"}, {"number", "NN"}, {"count", "NN"}, {"time", "NN"},
    {"year", "NN"}, {"way", "NN"}, {"day", "NN"}, {"part", "NN"},
    {"place", "NN"}, {"case", "NN"}, {"week", "NN"}, {"group", "NN"},
    {"problem", "NN"}, {"fact", "NN"}, {"example", "NN"}, {"set", "NN"},
    {"value", "NN"}, {"feature", "NN"}, {"weight", "NN"}, {"score", "NN"},
    {"query", "NN"}, {"search", "NN"}, {"engine", "NN"}, {"web", "NN"},
    {"knowledge", "NN"}, {"language", "NN"}, {"text", "NN"},
    {"machine", "NN"}, {"learning", "NN"}, {"network", "NN"},
    {"keyphrase", "NN"}, {"keyword", "NN"}, {"phrase", "NN"},
    {"sentence", "NN"}, {"paragraph", "NN"}, {"topic", "NN"},
    {"concept", "NN"}, {"subject", "NN"}, {"collection", "NN"},
    {"database", "NN"}, {"service", "NN"}, {"software", "NN"},
    {"application", "NN"}, {"interface", "NN"}, {"scenario", "NN"},
    {"baseline", "NN"}, {"precision", "NN"}, {"recall", "NN"},
    {"measure", "NN"}, {"metric", "NN"}, {"distribution", "NN"},
    {"frequency", "NN"}, {"position", "NN"}, {"order", "NN"},
    {"structure", "NN"}, {"pattern", "NN"}, {"level", "NN"},
    {"type", "NN"}, {"kind", "NN"}, {"form", "NN"}, {"state", "NN"},
    {"process", "NN"}, {"data", "NNS"}, {"media", "NNS"},
    {"criteria", "NNS"}, {"people", "NNS"}, {"children", "NNS"},
    {"men", "NNS"}, {"women", "NNS"}, {"phenomena", "NNS"},
};
// clang-format on

const std::unordered_map<std::string_view, std::string_view>& lexicon() {
  static const auto* map = [] {
    auto* m = new std::unordered_map<std::string_view, std::string_view>();
    m->reserve(std::size(kLexicon) * 2);
    for (const auto& e : kLexicon) (*m)[e.word] = e.tag;
    return m;
  }();
  return *map;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.substr(w.size() - suffix.size()) == suffix;
}

std::string_view suffix_tag(std::string_view w) {
  std::size_t n = w.size();
  if (ends_with(w, "ss")) return "NN";
  if (n > 3 && ends_with(w, "s") && !ends_with(w, "us") && !ends_with(w, "is"))
    return "NNS";
  if (n > 4 && ends_with(w, "ing")) return "VBG";
  if (n > 3 && ends_with(w, "ed")) return "VBN";
  if (n > 3 && ends_with(w, "ly")) return "RB";
  if (n > 4 && ends_with(w, "est")) return "JJS";
  for (std::string_view jj : {"ive", "ous", "ful", "less", "able", "ible",
                              "ical", "ic", "al"})
    if (n > jj.size() + 1 && ends_with(w, jj)) return "JJ";
  return "NN";
}

}  // namespace

std::string PosTagger::tag_word(const std::string& lowercase_surface) const {
  const auto& lex = lexicon();
  if (auto it = lex.find(lowercase_surface); it != lex.end())
    return std::string(it->second);
  return std::string(suffix_tag(lowercase_surface));
}

void PosTagger::tag(std::vector<Token>& tokens) const {
  for (auto& t : tokens) t.pos = tag_word(t.surface);
}

bool is_noun_tag(std::string_view pos) {
  return pos == "NN" || pos == "NNS" || pos == "NNP" || pos == "NNPS";
}

}  // namespace relarec
