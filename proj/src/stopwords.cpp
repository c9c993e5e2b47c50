#include "geometria/corpus.hpp"

namespace geometria::corpus {

std::set<std::string> PreprocessConfig::default_stopwords() {
  // Compact English function-word list; overridable via stopwords_from_file.
  static const char* words[] = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "aren't", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can't",
      "cannot", "could", "couldn't", "did", "didn't", "do", "does", "doesn't",
      "doing", "don't", "down", "during", "each", "few", "for", "from",
      "further", "had", "hadn't", "has", "hasn't", "have", "haven't",
      "having", "he", "her", "here", "hers", "herself", "him", "himself",
      "his", "how", "i", "if", "in", "into", "is", "isn't", "it", "its",
      "itself", "let's", "me", "more", "most", "mustn't", "my", "myself",
      "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other",
      "ought", "our", "ours", "ourselves", "out", "over", "own", "same",
      "shan't", "she", "should", "shouldn't", "so", "some", "such", "than",
      "that", "the", "their", "theirs", "them", "themselves", "then",
      "there", "these", "they", "this", "those", "through", "to", "too",
      "under", "until", "up", "very", "was", "wasn't", "we", "were",
      "weren't", "what", "when", "where", "which", "while", "who", "whom",
      "why", "with", "won't", "would", "wouldn't", "you", "your", "yours",
      "yourself", "yourselves",
  };
  std::set<std::string> out;
  for (const char* w : words) out.insert(w);
  return out;
}

}  // namespace geometria::corpus
