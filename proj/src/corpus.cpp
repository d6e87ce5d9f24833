#include "hott/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hott {

namespace {

bool is_ascii_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::vector<std::string> sorted_class_set(const std::vector<std::string>& labels) {
    std::set<std::string> s(labels.begin(), labels.end());
    return {s.begin(), s.end()};
}

}  // namespace

bool Vocabulary::contains(std::string_view token) const {
    return index.find(std::string(token)) != index.end();
}

int Vocabulary::id_of(std::string_view token) const {
    auto it = index.find(std::string(token));
    return it == index.end() ? -1 : it->second;
}

Vocabulary Vocabulary::from_sorted_words(std::vector<std::string> sorted_words) {
    Vocabulary v;
    v.words = std::move(sorted_words);
    v.index.reserve(v.words.size());
    for (std::size_t i = 0; i < v.words.size(); ++i) {
        if (v.words[i].empty()) throw std::runtime_error("vocabulary token is empty");
        auto [it, inserted] = v.index.emplace(v.words[i], static_cast<int>(i));
        if (!inserted) throw std::runtime_error("duplicate vocabulary token: " + v.words[i]);
    }
    return v;
}

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (is_ascii_alpha(c)) {
            current.push_back(lowercase ? ascii_lower(c) : c);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Vocabulary build_vocabulary(const std::vector<RawDocument>& docs, int min_doc_freq,
                            int max_size) {
    if (min_doc_freq < 1) throw std::invalid_argument("min_doc_freq must be >= 1");
    if (max_size < 1) throw std::invalid_argument("max_size must be >= 1");

    // std::map keeps tokens in lexicographic order throughout.
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> stats;  // token -> {doc freq, total count}
    for (const auto& doc : docs) {
        std::map<std::string, std::int64_t> local;
        for (const auto& t : doc.tokens) {
            if (!t.empty()) ++local[t];
        }
        for (const auto& [tok, cnt] : local) {
            auto& s = stats[tok];
            s.first += 1;
            s.second += cnt;
        }
    }

    std::vector<std::pair<std::string, std::int64_t>> kept;  // token, total count
    for (const auto& [tok, s] : stats) {
        if (s.first >= min_doc_freq) kept.emplace_back(tok, s.second);
    }
    if (kept.empty()) throw std::runtime_error("empty vocabulary");

    if (static_cast<int>(kept.size()) > max_size) {
        std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        kept.resize(max_size);
    }

    std::vector<std::string> words;
    words.reserve(kept.size());
    for (auto& [tok, cnt] : kept) words.push_back(std::move(tok));
    std::sort(words.begin(), words.end());
    return Vocabulary::from_sorted_words(std::move(words));
}

DocumentDistribution to_distribution(const RawDocument& doc, const Vocabulary& vocab) {
    std::map<int, std::int64_t> counts;
    for (const auto& t : doc.tokens) {
        int id = vocab.id_of(t);
        if (id >= 0) ++counts[id];
    }
    if (counts.empty()) {
        throw std::runtime_error("document empty after filtering" +
                                 (doc.id.empty() ? std::string() : " (id " + doc.id + ")"));
    }
    DocumentDistribution d;
    std::int64_t total = 0;
    for (const auto& [id, c] : counts) total += c;
    d.total_words = total;
    d.support.reserve(counts.size());
    d.mass.reserve(counts.size());
    for (const auto& [id, c] : counts) {
        d.support.push_back(id);
        d.mass.push_back(static_cast<double>(c) / static_cast<double>(total));
    }
    return d;
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double train_fraction,
                                       SplitMode mode, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train_fraction must be in (0,1)");
    }
    const std::size_t n = corpus.size();
    if (n < 2) throw std::runtime_error("corpus too small to split");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (mode == SplitMode::SeededShuffle) {
        std::mt19937_64 rng(seed);
        for (std::size_t i = n - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(order[i], order[j]);
        }
    }

    const auto n_train =
        static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        throw std::runtime_error("split produces an empty train or test set");
    }

    auto take = [&](std::size_t begin, std::size_t end) {
        Corpus c;
        c.vocabulary = corpus.vocabulary;
        for (std::size_t k = begin; k < end; ++k) {
            std::size_t i = order[k];
            c.documents.push_back(corpus.documents[i]);
            c.labels.push_back(corpus.labels[i]);
            c.ids.push_back(corpus.ids[i]);
        }
        c.class_set = sorted_class_set(c.labels);
        return c;
    };
    return {take(0, n_train), take(n_train, n)};
}

std::vector<RawDocument> read_labeled_lines(std::istream& in, bool lowercase) {
    std::vector<RawDocument> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            ++line_no;
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error("line " + std::to_string(line_no + 1) +
                                     ": expected 'label<TAB>text'");
        }
        RawDocument doc;
        doc.label = line.substr(0, tab);
        if (doc.label.empty()) {
            throw std::runtime_error("line " + std::to_string(line_no + 1) + ": empty label");
        }
        doc.tokens = tokenize(std::string_view(line).substr(tab + 1), lowercase);
        doc.id = std::to_string(line_no);
        docs.push_back(std::move(doc));
        ++line_no;
    }
    return docs;
}

namespace {

CorpusBuildResult assemble(const std::vector<RawDocument>& docs, Vocabulary vocab) {
    CorpusBuildResult out;
    out.corpus.vocabulary = std::move(vocab);
    for (const auto& doc : docs) {
        DocumentDistribution dist;
        try {
            dist = to_distribution(doc, out.corpus.vocabulary);
        } catch (const std::runtime_error&) {
            ++out.dropped_documents;
            continue;
        }
        out.corpus.documents.push_back(std::move(dist));
        out.corpus.labels.push_back(doc.label);
        out.corpus.ids.push_back(doc.id);
    }
    if (out.corpus.documents.empty()) {
        throw std::runtime_error("no documents survived vocabulary filtering");
    }
    out.corpus.class_set = sorted_class_set(out.corpus.labels);
    return out;
}

}  // namespace

CorpusBuildResult build_corpus(const std::vector<RawDocument>& docs, int min_doc_freq,
                               int max_size) {
    return assemble(docs, build_vocabulary(docs, min_doc_freq, max_size));
}

CorpusBuildResult build_corpus_with_vocabulary(const std::vector<RawDocument>& docs,
                                               const Vocabulary& vocab) {
    return assemble(docs, vocab);
}

void save_corpus(std::ostream& out, const Corpus& corpus, const std::string& config) {
    out << "hott corpus 1\n";
    out << "config " << config << "\n";
    out << "vocab " << corpus.vocabulary.size() << "\n";
    out << "docs " << corpus.size() << "\n";
    for (const auto& w : corpus.vocabulary.words) out << w << "\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& d = corpus.documents[i];
        out << corpus.labels[i] << '\t' << corpus.ids[i];
        for (std::size_t j = 0; j < d.support.size(); ++j) {
            // store integer counts so distributions reload exactly
            auto count = static_cast<std::int64_t>(
                std::llround(d.mass[j] * static_cast<double>(d.total_words)));
            out << (j == 0 ? '\t' : ' ') << d.support[j] << ':' << count;
        }
        out << "\n";
    }
}

Corpus load_corpus(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "hott corpus 1") {
        throw std::runtime_error("not a corpus file (bad magic line)");
    }
    if (!std::getline(in, line) || line.rfind("config ", 0) != 0) {
        throw std::runtime_error("corpus file missing config line");
    }
    auto read_sized = [&](const char* key) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated corpus header");
        std::istringstream ss(line);
        std::string k;
        std::size_t v = 0;
        ss >> k >> v;
        if (k != key) throw std::runtime_error("corpus header: expected " + std::string(key));
        return v;
    };
    const std::size_t n_vocab = read_sized("vocab");
    const std::size_t n_docs = read_sized("docs");

    std::vector<std::string> words;
    words.reserve(n_vocab);
    for (std::size_t i = 0; i < n_vocab; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated vocabulary section");
        words.push_back(line);
    }
    Corpus corpus;
    corpus.vocabulary = Vocabulary::from_sorted_words(std::move(words));

    for (std::size_t i = 0; i < n_docs; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated document section");
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos) {
            throw std::runtime_error("corpus document line " + std::to_string(i) + " malformed");
        }
        corpus.labels.push_back(line.substr(0, t1));
        corpus.ids.push_back(line.substr(t1 + 1, t2 - t1 - 1));

        DocumentDistribution d;
        std::istringstream ss(line.substr(t2 + 1));
        std::string cell;
        std::int64_t total = 0;
        std::vector<std::int64_t> counts;
        while (ss >> cell) {
            auto colon = cell.find(':');
            if (colon == std::string::npos) throw std::runtime_error("bad id:count cell");
            int id = std::stoi(cell.substr(0, colon));
            std::int64_t c = std::stoll(cell.substr(colon + 1));
            if (id < 0 || id >= corpus.vocabulary.size() || c <= 0) {
                throw std::runtime_error("bad id:count cell");
            }
            if (!d.support.empty() && id <= d.support.back()) {
                throw std::runtime_error("document support not strictly increasing");
            }
            d.support.push_back(id);
            counts.push_back(c);
            total += c;
        }
        if (d.support.empty()) throw std::runtime_error("empty document in corpus file");
        d.total_words = total;
        d.mass.reserve(counts.size());
        for (auto c : counts) {
            d.mass.push_back(static_cast<double>(c) / static_cast<double>(total));
        }
        corpus.documents.push_back(std::move(d));
    }
    corpus.class_set = sorted_class_set(corpus.labels);
    return corpus;
}

Corpus load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    return load_corpus(in);
}

void export_vocabulary(std::ostream& out, const Vocabulary& vocab) {
    for (const auto& w : vocab.words) out << w << "\n";
}

}  // namespace hott
