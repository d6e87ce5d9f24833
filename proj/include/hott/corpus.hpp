#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hott {

/// Ordered token list with a bijective token -> id lookup.
/// Ids run 0..size()-1 and are assigned in lexicographic token order.
struct Vocabulary {
    std::vector<std::string> words;
    std::unordered_map<std::string, int> index;

    int size() const { return static_cast<int>(words.size()); }
    bool contains(std::string_view token) const;
    int id_of(std::string_view token) const;  // -1 if absent

    /// Builds from an already sorted, duplicate-free token list.
    static Vocabulary from_sorted_words(std::vector<std::string> sorted_words);
};

struct RawDocument {
    std::string label;
    std::vector<std::string> tokens;
    std::string id;
};

/// Sparse normalized bag-of-words over vocabulary ids.
/// support is strictly increasing, masses are positive and sum to 1.
struct DocumentDistribution {
    std::vector<int> support;
    std::vector<double> mass;
    std::int64_t total_words = 0;

    std::size_t unique_words() const { return support.size(); }
};

struct Corpus {
    Vocabulary vocabulary;
    std::vector<DocumentDistribution> documents;
    std::vector<std::string> labels;
    std::vector<std::string> ids;
    std::vector<std::string> class_set;  // distinct labels, sorted

    std::size_t size() const { return documents.size(); }
};

/// Maximal runs of ASCII alphabetic characters; everything else separates.
std::vector<std::string> tokenize(std::string_view text, bool lowercase = true);

/// Keeps tokens appearing in >= min_doc_freq documents; if more than max_size
/// survive, keeps the max_size highest-total-count tokens (ties favor the
/// lexicographically smaller token). Ids are assigned in lexicographic order.
Vocabulary build_vocabulary(const std::vector<RawDocument>& docs, int min_doc_freq,
                            int max_size);

/// Normalized in-vocabulary counts; out-of-vocabulary tokens are dropped
/// before counting. Throws if nothing survives filtering.
DocumentDistribution to_distribution(const RawDocument& doc, const Vocabulary& vocab);

enum class SplitMode { InOrder, SeededShuffle };

/// In-order mode takes the first ceil(fraction*n) documents as train;
/// seeded-shuffle permutes first. Throws if either split is empty.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double train_fraction,
                                       SplitMode mode, std::uint64_t seed = 0);

/// One record per line, "label<TAB>text"; text is tokenized here.
/// Document ids are the 0-based input line numbers.
std::vector<RawDocument> read_labeled_lines(std::istream& in, bool lowercase = true);

struct CorpusBuildResult {
    Corpus corpus;
    std::size_t dropped_documents = 0;  // empty after vocabulary filtering
};

CorpusBuildResult build_corpus(const std::vector<RawDocument>& docs, int min_doc_freq,
                               int max_size);

/// Rebuilds distributions for existing raw documents against a fixed
/// vocabulary (used for train/test ingestion with a shared vocabulary).
CorpusBuildResult build_corpus_with_vocabulary(const std::vector<RawDocument>& docs,
                                               const Vocabulary& vocab);

void save_corpus(std::ostream& out, const Corpus& corpus, const std::string& config);
Corpus load_corpus(std::istream& in);
Corpus load_corpus_file(const std::string& path);

/// One token per line, line number = id.
void export_vocabulary(std::ostream& out, const Vocabulary& vocab);

}  // namespace hott
