#pragma once

#include "moo/core.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace moo::genesel {

/// Denominator floor for zero-variance genes.
inline constexpr double kSigmaEpsilon = 1e-9;

/// Two-class expression matrix with a train/test split. Class index 0 is
/// the first class declared in the label source ("class 1" in the voting
/// rule), index 1 the second.
struct Dataset {
    std::vector<std::string> gene_ids;
    std::vector<std::string> sample_ids;
    std::vector<double> expression; // gene-major, gene_count x sample_count
    std::array<std::string, 2> class_names{};
    std::vector<std::uint8_t> label;      // per sample: 0 or 1
    std::vector<std::uint32_t> train;     // sample indices
    std::vector<std::uint32_t> test;

    std::size_t gene_count() const { return gene_ids.size(); }
    std::size_t sample_count() const { return sample_ids.size(); }

    double value(std::size_t gene, std::size_t sample) const {
        return expression[gene * sample_count() + sample];
    }

    void validate() const {
        moo::detail::require(expression.size() == gene_count() * sample_count(),
                             "dataset: expression matrix shape mismatch");
        moo::detail::require(label.size() == sample_count(), "dataset: label count mismatch");
        for (double v : expression)
            moo::detail::require(std::isfinite(v), "dataset: non-finite expression value");
        std::vector<std::uint8_t> seen(sample_count(), 0);
        for (std::uint32_t s : train) {
            moo::detail::require(s < sample_count() && !seen[s], "dataset: bad train split");
            seen[s] = 1;
        }
        for (std::uint32_t s : test) {
            moo::detail::require(s < sample_count() && !seen[s], "dataset: overlapping splits");
            seen[s] = 1;
        }
        moo::detail::require(std::all_of(seen.begin(), seen.end(), [](auto x) { return x != 0; }),
                             "dataset: splits must cover every sample");
        bool has[2] = {false, false};
        for (std::uint32_t s : train) has[label[s]] = true;
        moo::detail::require(has[0] && has[1], "dataset: both classes required in training set");
    }
};

/// Per-gene voting entry: class statistics, signal-to-noise weight and the
/// midpoint threshold.
struct VotingModel {
    struct Entry {
        std::uint32_t gene = 0;
        double mean[2] = {0.0, 0.0};
        double sd[2] = {0.0, 0.0}; // population convention (divide by n)
        double weight = 0.0;
        double threshold = 0.0;
    };
    std::vector<Entry> entries;

    bool empty() const { return entries.empty(); }
};

namespace detail {

// Class-wise sums and sums of squares per selected gene over a sample set;
// the LOOCV loop downdates these instead of re-scanning the samples.
struct SubsetStats {
    std::vector<std::uint32_t> genes;
    std::vector<double> sum[2];
    std::vector<double> sumsq[2];
    std::size_t count[2] = {0, 0};
};

inline std::vector<std::uint32_t> selected_genes(const Genome& subset) {
    std::vector<std::uint32_t> genes;
    for (std::uint32_t g = 0; g < subset.size(); ++g)
        if (subset[g]) genes.push_back(g);
    return genes;
}

inline SubsetStats accumulate(const Dataset& ds, std::vector<std::uint32_t> genes,
                              const std::vector<std::uint32_t>& samples) {
    SubsetStats st;
    st.genes = std::move(genes);
    for (int c = 0; c < 2; ++c) {
        st.sum[c].assign(st.genes.size(), 0.0);
        st.sumsq[c].assign(st.genes.size(), 0.0);
    }
    for (std::uint32_t s : samples) {
        const int c = ds.label[s];
        ++st.count[c];
        for (std::size_t i = 0; i < st.genes.size(); ++i) {
            const double x = ds.value(st.genes[i], s);
            st.sum[c][i] += x;
            st.sumsq[c][i] += x * x;
        }
    }
    return st;
}

inline double population_sd(double sum, double sumsq, std::size_t n) {
    const double mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - mean * mean;
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

inline VotingModel model_from_stats(const SubsetStats& st) {
    VotingModel model;
    model.entries.resize(st.genes.size());
    for (std::size_t i = 0; i < st.genes.size(); ++i) {
        VotingModel::Entry& e = model.entries[i];
        e.gene = st.genes[i];
        for (int c = 0; c < 2; ++c) {
            e.mean[c] = st.sum[c][i] / static_cast<double>(st.count[c]);
            e.sd[c] = population_sd(st.sum[c][i], st.sumsq[c][i], st.count[c]);
        }
        double denom = e.sd[0] + e.sd[1];
        if (denom < kSigmaEpsilon) denom = kSigmaEpsilon;
        e.weight = (e.mean[0] - e.mean[1]) / denom;
        e.threshold = 0.5 * (e.mean[0] + e.mean[1]);
    }
    return model;
}

}  // namespace detail

/// Golub-style signal-to-noise weight of one gene over the given samples.
inline double signal_to_noise(const Dataset& ds, std::size_t gene,
                              const std::vector<std::uint32_t>& samples) {
    moo::detail::require(gene < ds.gene_count(), "signal_to_noise: gene index out of range");
    auto st = detail::accumulate(ds, {static_cast<std::uint32_t>(gene)}, samples);
    if (st.count[0] == 0 || st.count[1] == 0)
        throw ContractViolation("signal_to_noise: both classes required");
    return detail::model_from_stats(st).entries[0].weight;
}

/// Fits the weighted-voting classifier for the selected genes on the given
/// training samples.
inline VotingModel fit_model(const Dataset& ds, const Genome& subset,
                             const std::vector<std::uint32_t>& samples) {
    moo::detail::require(subset.size() == ds.gene_count(), "fit_model: subset length mismatch");
    auto genes = detail::selected_genes(subset);
    if (genes.empty()) throw ContractViolation("fit_model: empty gene subset");
    auto st = detail::accumulate(ds, std::move(genes), samples);
    if (st.count[0] == 0 || st.count[1] == 0)
        throw ContractViolation("fit_model: both classes required");
    return detail::model_from_stats(st);
}

/// Sign-of-sum vote: positive totals elect class index 0, negative index 1,
/// an exact zero resolves to class index 0.
inline int weighted_vote_predict(const VotingModel& model, const Dataset& ds,
                                 std::size_t sample) {
    moo::detail::require(!model.empty(), "weighted_vote_predict: empty model");
    double total = 0.0;
    for (const auto& e : model.entries)
        total += e.weight * (ds.value(e.gene, sample) - e.threshold);
    return total < 0.0 ? 1 : 0;
}

/// Leave-one-out mismatches over the training set. Each fold refits the
/// class statistics without the held-out sample; a fold whose removal
/// empties a class counts as a mismatch instead of aborting.
inline std::uint32_t loocv_errors(const Dataset& ds, const Genome& subset) {
    if (ds.train.size() < 3) throw ContractViolation("loocv_errors: training set too small");
    moo::detail::require(subset.size() == ds.gene_count(), "loocv_errors: subset length mismatch");
    auto genes = detail::selected_genes(subset);
    if (genes.empty()) throw ContractViolation("loocv_errors: empty gene subset");
    auto st = detail::accumulate(ds, std::move(genes), ds.train);
    if (st.count[0] == 0 || st.count[1] == 0)
        throw ContractViolation("loocv_errors: both classes required");

    std::uint32_t mismatches = 0;
    for (std::uint32_t s : ds.train) {
        const int held = ds.label[s];
        if (st.count[held] == 1) { // fold would empty a class
            ++mismatches;
            continue;
        }
        const int other = 1 - held;
        const std::size_t n_held = st.count[held] - 1;
        double total = 0.0;
        for (std::size_t i = 0; i < st.genes.size(); ++i) {
            const double x = ds.value(st.genes[i], s);
            double mean[2];
            double sd[2];
            mean[held] = (st.sum[held][i] - x) / static_cast<double>(n_held);
            sd[held] = detail::population_sd(st.sum[held][i] - x, st.sumsq[held][i] - x * x,
                                             n_held);
            mean[other] = st.sum[other][i] / static_cast<double>(st.count[other]);
            sd[other] = detail::population_sd(st.sum[other][i], st.sumsq[other][i],
                                              st.count[other]);
            double denom = sd[0] + sd[1];
            if (denom < kSigmaEpsilon) denom = kSigmaEpsilon;
            const double weight = (mean[0] - mean[1]) / denom;
            const double threshold = 0.5 * (mean[0] + mean[1]);
            total += weight * (x - threshold);
        }
        const int predicted = total < 0.0 ? 1 : 0;
        if (predicted != held) ++mismatches;
    }
    return mismatches;
}

/// Mismatches over the test split using a classifier fit on the whole
/// training set. An empty test split yields zero.
inline std::uint32_t test_errors(const Dataset& ds, const Genome& subset) {
    if (ds.test.empty()) return 0;
    VotingModel model = fit_model(ds, subset, ds.train);
    std::uint32_t mismatches = 0;
    for (std::uint32_t s : ds.test)
        if (weighted_vote_predict(model, ds, s) != ds.label[s]) ++mismatches;
    return mismatches;
}

/// The three-objective evaluation: (subset size, LOOCV mismatches, test
/// mismatches). The empty subset maps to worst-case errors so evaluation
/// stays total.
inline ObjectiveVector evaluate(const Dataset& ds, const Genome& subset) {
    moo::detail::require(subset.size() == ds.gene_count(), "evaluate: genome length mismatch");
    const auto size = static_cast<double>(std::count(subset.begin(), subset.end(), 1));
    if (size == 0.0)
        return {0.0, static_cast<double>(ds.train.size()), static_cast<double>(ds.test.size())};
    return {size, static_cast<double>(loocv_errors(ds, subset)),
            static_cast<double>(test_errors(ds, subset))};
}

/// Adapts a Dataset to the evolution Problem interface. Initial subsets are
/// thinned to roughly 25 genes so large matrices do not start the search
/// from enormous subsets.
struct GeneSubsetProblem {
    const Dataset* data = nullptr;

    explicit GeneSubsetProblem(const Dataset& ds) : data(&ds) {}

    std::size_t genome_length() const { return data->gene_count(); }
    std::size_t objective_count() const { return 3; }
    double init_density() const {
        return std::min(0.5, 25.0 / static_cast<double>(data->gene_count()));
    }
    ObjectiveVector evaluate(const Genome& g) const { return genesel::evaluate(*data, g); }
};

struct SynthDataset {
    Dataset data;
    std::vector<std::uint32_t> informative; // gene rows carrying class signal
};

/// Synthetic two-class dataset: K informative genes with class means at
/// +/- separation/2 and unit variance, the rest class-independent noise.
/// Labels are balanced within each split; fully deterministic under seed.
inline SynthDataset synth_dataset(std::size_t genes, std::size_t train_samples,
                                  std::size_t test_samples, std::size_t informative,
                                  double separation, std::uint64_t seed) {
    if (informative > genes) throw ConfigError("synth_dataset: informative > genes");
    if (train_samples < 4 || test_samples < 4)
        throw ConfigError("synth_dataset: each split needs at least 4 samples");
    if (!(separation >= 0.0) || !std::isfinite(separation))
        throw ConfigError("synth_dataset: separation must be finite and >= 0");

    const std::size_t samples = train_samples + test_samples;
    SynthDataset out;
    Dataset& ds = out.data;
    ds.class_names = {"A", "B"};
    ds.gene_ids.reserve(genes);
    for (std::size_t g = 0; g < genes; ++g) ds.gene_ids.push_back("g" + std::to_string(g));
    ds.sample_ids.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) ds.sample_ids.push_back("s" + std::to_string(s));

    ds.label.resize(samples);
    for (std::size_t s = 0; s < train_samples; ++s) {
        ds.label[s] = s < (train_samples + 1) / 2 ? 0 : 1;
        ds.train.push_back(static_cast<std::uint32_t>(s));
    }
    for (std::size_t s = train_samples; s < samples; ++s) {
        ds.label[s] = (s - train_samples) < (test_samples + 1) / 2 ? 0 : 1;
        ds.test.push_back(static_cast<std::uint32_t>(s));
    }

    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> rows(genes);
    for (std::size_t g = 0; g < genes; ++g) rows[g] = static_cast<std::uint32_t>(g);
    for (std::size_t i = 0; i < informative; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, genes - 1);
        std::swap(rows[i], rows[pick(rng)]);
    }
    out.informative.assign(rows.begin(), rows.begin() + informative);
    std::sort(out.informative.begin(), out.informative.end());
    std::vector<std::uint8_t> is_informative(genes, 0);
    for (std::uint32_t g : out.informative) is_informative[g] = 1;

    ds.expression.resize(genes * samples);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t g = 0; g < genes; ++g) {
        for (std::size_t s = 0; s < samples; ++s) {
            double mean = 0.0;
            if (is_informative[g]) mean = ds.label[s] == 0 ? separation / 2.0 : -separation / 2.0;
            ds.expression[g * samples + s] = mean + noise(rng);
        }
    }
    ds.validate();
    return out;
}

}  // namespace moo::genesel
