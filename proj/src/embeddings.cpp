#include "hott/embeddings.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace hott {

EmbeddingTable::EmbeddingTable(int vocab_size, int dimension)
    : dimension_(dimension), slot_(static_cast<std::size_t>(vocab_size), -1) {}

std::span<const double> EmbeddingTable::vector_of(int vocab_id) const {
    int row = slot_[static_cast<std::size_t>(vocab_id)];
    if (row < 0) throw std::runtime_error("no embedding for vocabulary id " + std::to_string(vocab_id));
    return {data_.data() + static_cast<std::size_t>(row) * dimension_,
            static_cast<std::size_t>(dimension_)};
}

void EmbeddingTable::set(int vocab_id, std::span<const double> v) {
    if (static_cast<int>(v.size()) != dimension_) {
        throw std::invalid_argument("embedding dimension mismatch");
    }
    auto& s = slot_[static_cast<std::size_t>(vocab_id)];
    if (s >= 0) return;  // first occurrence wins
    s = static_cast<int>(data_.size() / dimension_);
    data_.insert(data_.end(), v.begin(), v.end());
}

void EmbeddingTable::finalize_coverage() {
    if (slot_.empty()) {
        coverage_ = 0.0;
        return;
    }
    std::size_t have = 0;
    for (int s : slot_) have += (s >= 0);
    coverage_ = static_cast<double>(have) / static_cast<double>(slot_.size());
}

EmbeddingTable load_embeddings(std::istream& in, const Vocabulary& vocab) {
    std::string line;
    std::size_t line_no = 0;
    int dim = -1;
    EmbeddingTable table;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        auto space = line.find(' ');
        if (space == std::string::npos || space == 0) {
            throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                                     ": expected 'token v1 v2 ...'");
        }
        std::string token = line.substr(0, space);

        values.clear();
        {
            const char* p = line.c_str() + space;
            char* end = nullptr;
            while (*p) {
                while (*p == ' ') ++p;
                if (!*p) break;
                double v = std::strtod(p, &end);
                if (end == p) {
                    throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                                             ": bad number");
                }
                values.push_back(v);
                p = end;
            }
        }
        if (values.empty()) {
            throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                                     ": no vector components");
        }
        if (dim < 0) {
            dim = static_cast<int>(values.size());
            table = EmbeddingTable(vocab.size(), dim);
        } else if (static_cast<int>(values.size()) != dim) {
            throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                                     ": dimension mismatch (expected " + std::to_string(dim) +
                                     ", got " + std::to_string(values.size()) + ")");
        }
        int id = vocab.id_of(token);
        if (id >= 0) table.set(id, values);
    }
    if (dim < 0) throw std::runtime_error("embeddings input is empty");
    table.finalize_coverage();
    if (table.coverage() == 0.0) {
        throw std::runtime_error("embeddings cover no vocabulary token (zero coverage)");
    }
    return table;
}

namespace {

std::string gunzip_whole(const std::string& compressed) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw std::runtime_error("inflateInit2 failed");
    std::string out;
    out.resize(compressed.size() * 4 + 1024);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());
    std::size_t written = 0;
    int ret = Z_OK;
    while (ret != Z_STREAM_END) {
        if (written == out.size()) out.resize(out.size() * 2);
        zs.next_out = reinterpret_cast<Bytef*>(out.data() + written);
        zs.avail_out = static_cast<uInt>(out.size() - written);
        ret = inflate(&zs, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error("gzip inflate failed");
        }
        written = out.size() - zs.avail_out;
    }
    inflateEnd(&zs);
    out.resize(written);
    return out;
}

}  // namespace

EmbeddingTable load_embeddings_file(const std::string& path, const Vocabulary& vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open embeddings file: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    in.clear();
    in.seekg(0);
    if (static_cast<unsigned char>(magic[0]) == 0x1f &&
        static_cast<unsigned char>(magic[1]) == 0x8b) {
        std::ostringstream raw;
        raw << in.rdbuf();
        std::istringstream text(gunzip_whole(raw.str()));
        return load_embeddings(text, vocab);
    }
    return load_embeddings(in, vocab);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

CostMatrix cost_matrix(std::span<const int> a_ids, std::span<const int> b_ids,
                       const EmbeddingTable& table, int ground_power,
                       const Vocabulary* vocab_for_errors) {
    if (ground_power != 1 && ground_power != 2) {
        throw std::invalid_argument("ground_power must be 1 or 2");
    }
    auto require = [&](int id) {
        if (!table.has(id)) {
            std::string word = vocab_for_errors ? vocab_for_errors->words[id]
                                                : ("id " + std::to_string(id));
            throw std::runtime_error("missing embedding for word: " + word);
        }
    };
    for (int id : a_ids) require(id);
    for (int id : b_ids) require(id);

    CostMatrix c;
    c.rows = static_cast<int>(a_ids.size());
    c.cols = static_cast<int>(b_ids.size());
    c.ground_power = ground_power;
    c.entries.resize(static_cast<std::size_t>(c.rows) * c.cols);
    for (int i = 0; i < c.rows; ++i) {
        auto va = table.vector_of(a_ids[i]);
        for (int j = 0; j < c.cols; ++j) {
            double d = euclidean_distance(va, table.vector_of(b_ids[j]));
            c.at(i, j) = ground_power == 1 ? d : d * d;
        }
    }
    return c;
}

}  // namespace hott
