#pragma once

#include "moo/core.hpp"
#include "moo/genesel.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace moo::dataio {

/// Parse or validation failure in an input file. `line` is 1-based; 0 marks
/// whole-file problems (e.g. a sample missing entirely).
struct ParseError : std::runtime_error {
    std::string file;
    std::size_t line = 0;

    ParseError(std::string file_, std::size_t line_, const std::string& what_)
        : std::runtime_error(line_ > 0 ? file_ + ":" + std::to_string(line_) + ": " + what_
                                       : file_ + ": " + what_),
          file(std::move(file_)),
          line(line_) {}
};

struct ExpressionData {
    std::vector<std::string> gene_ids;
    std::vector<std::string> sample_ids;
    std::vector<double> values; // gene-major

    bool operator==(const ExpressionData&) const = default;
};

struct LabelData {
    std::array<std::string, 2> class_names{};
    std::vector<std::uint8_t> label;  // per sample, index into class_names
    std::vector<std::uint32_t> train;
    std::vector<std::uint32_t> test;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

inline bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

// Reads all lines, stripping a trailing '\r' so CRLF files parse too.
inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace detail

/// Loads a gene-expression matrix. Format: header `gene_id,<sample ids>`;
/// one row per gene, comma separated, '.' decimal separator.
inline ExpressionData load_expression_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) throw ParseError(path, 1, "empty file");

    const auto header = detail::split_csv_line(lines[0]);
    if (header.size() < 2 || header[0] != "gene_id")
        throw ParseError(path, 1, "expected header 'gene_id,<sample ids>'");

    ExpressionData data;
    data.sample_ids.assign(header.begin() + 1, header.end());
    {
        std::unordered_set<std::string> seen;
        for (const auto& id : data.sample_ids)
            if (id.empty() || !seen.insert(id).second)
                throw ParseError(path, 1, "empty or duplicate sample id '" + id + "'");
    }
    const std::size_t samples = data.sample_ids.size();

    std::unordered_set<std::string> gene_seen;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break; // trailing newline
        const auto cells = detail::split_csv_line(lines[li]);
        if (cells.size() != samples + 1)
            throw ParseError(path, li + 1,
                             "expected " + std::to_string(samples + 1) + " cells, got " +
                                 std::to_string(cells.size()));
        if (cells[0].empty()) throw ParseError(path, li + 1, "empty gene id");
        if (!gene_seen.insert(cells[0]).second)
            throw ParseError(path, li + 1, "duplicate gene id '" + cells[0] + "'");
        data.gene_ids.push_back(cells[0]);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            if (!detail::parse_double(cells[c], v))
                throw ParseError(path, li + 1, "non-numeric cell '" + cells[c] + "'");
            data.values.push_back(v);
        }
    }
    if (data.gene_ids.empty()) throw ParseError(path, 1, "no gene rows");
    return data;
}

/// Writes a matrix in the same format; 17 significant digits so a reload
/// reproduces every value bit-exactly.
inline void write_expression_csv(const std::string& path, const ExpressionData& data) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "gene_id";
    for (const auto& id : data.sample_ids) out << ',' << id;
    out << '\n';
    char buf[64];
    const std::size_t samples = data.sample_ids.size();
    for (std::size_t g = 0; g < data.gene_ids.size(); ++g) {
        out << data.gene_ids[g];
        for (std::size_t s = 0; s < samples; ++s) {
            std::snprintf(buf, sizeof buf, "%.17g", data.values[g * samples + s]);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

/// Loads per-sample class and split tags. Format: `sample_id,class,split`
/// with split in {train,test}; every expression sample must appear exactly
/// once and exactly two classes must be present overall.
inline LabelData load_labels(const std::string& path,
                             const std::vector<std::string>& sample_ids) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) throw ParseError(path, 1, "empty file");
    if (detail::split_csv_line(lines[0]) != std::vector<std::string>{"sample_id", "class", "split"})
        throw ParseError(path, 1, "expected header 'sample_id,class,split'");

    std::unordered_map<std::string, std::uint32_t> index_of;
    for (std::uint32_t i = 0; i < sample_ids.size(); ++i) index_of.emplace(sample_ids[i], i);

    LabelData out;
    out.label.assign(sample_ids.size(), 0);
    std::vector<std::string> classes;
    std::vector<std::uint8_t> assigned(sample_ids.size(), 0);

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break;
        const auto cells = detail::split_csv_line(lines[li]);
        if (cells.size() != 3)
            throw ParseError(path, li + 1, "expected 3 cells, got " + std::to_string(cells.size()));
        const auto it = index_of.find(cells[0]);
        if (it == index_of.end())
            throw ParseError(path, li + 1, "unknown sample id '" + cells[0] + "'");
        const std::uint32_t sample = it->second;
        if (assigned[sample])
            throw ParseError(path, li + 1, "sample '" + cells[0] + "' labeled twice");
        assigned[sample] = 1;

        auto cls = std::find(classes.begin(), classes.end(), cells[1]);
        if (cls == classes.end()) {
            if (classes.size() == 2)
                throw ParseError(path, li + 1, "third class value '" + cells[1] + "'");
            classes.push_back(cells[1]);
            cls = classes.end() - 1;
        }
        out.label[sample] = static_cast<std::uint8_t>(cls - classes.begin());

        if (cells[2] == "train")
            out.train.push_back(sample);
        else if (cells[2] == "test")
            out.test.push_back(sample);
        else
            throw ParseError(path, li + 1, "split must be 'train' or 'test', got '" + cells[2] + "'");
    }

    for (std::uint32_t i = 0; i < sample_ids.size(); ++i)
        if (!assigned[i]) throw ParseError(path, 0, "sample '" + sample_ids[i] + "' has no label");
    if (classes.size() != 2) throw ParseError(path, 0, "exactly two classes required");
    bool in_train[2] = {false, false};
    for (std::uint32_t s : out.train) in_train[out.label[s]] = true;
    if (!in_train[0] || !in_train[1])
        throw ParseError(path, 0, "both classes must appear in the training split");

    out.class_names = {classes[0], classes[1]};
    return out;
}

inline genesel::Dataset make_dataset(ExpressionData expr, LabelData labels) {
    genesel::Dataset ds;
    ds.gene_ids = std::move(expr.gene_ids);
    ds.sample_ids = std::move(expr.sample_ids);
    ds.expression = std::move(expr.values);
    ds.class_names = std::move(labels.class_names);
    ds.label = std::move(labels.label);
    ds.train = std::move(labels.train);
    ds.test = std::move(labels.test);
    ds.validate();
    return ds;
}

inline genesel::Dataset load_dataset(const std::string& expression_path,
                                     const std::string& labels_path) {
    ExpressionData expr = load_expression_csv(expression_path);
    LabelData labels = load_labels(labels_path, expr.sample_ids);
    return make_dataset(std::move(expr), std::move(labels));
}

/// Keeps the k genes with the largest |signal-to-noise| over the training
/// samples only, ties broken by gene index ascending; row order preserved.
inline genesel::Dataset prefilter_top_k(const genesel::Dataset& ds, std::size_t k) {
    if (k < 1 || k > ds.gene_count())
        throw ConfigError("prefilter_top_k: k must be in 1..gene_count");

    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(ds.gene_count());
    for (std::uint32_t g = 0; g < ds.gene_count(); ++g)
        scored.emplace_back(std::abs(genesel::signal_to_noise(ds, g, ds.train)), g);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    std::vector<std::uint32_t> keep;
    keep.reserve(k);
    for (std::size_t i = 0; i < k; ++i) keep.push_back(scored[i].second);
    std::sort(keep.begin(), keep.end());

    genesel::Dataset out;
    out.sample_ids = ds.sample_ids;
    out.class_names = ds.class_names;
    out.label = ds.label;
    out.train = ds.train;
    out.test = ds.test;
    out.gene_ids.reserve(k);
    out.expression.reserve(k * ds.sample_count());
    for (std::uint32_t g : keep) {
        out.gene_ids.push_back(ds.gene_ids[g]);
        const auto row = ds.expression.begin() + g * ds.sample_count();
        out.expression.insert(out.expression.end(), row, row + ds.sample_count());
    }
    out.validate();
    return out;
}

}  // namespace moo::dataio
