#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "errors.hpp"

namespace curator {

struct Label {
    std::string name;
    std::string description; // empty = none, prompt-only metadata
};

// Ordered set of class labels; the order fixes the class-index mapping for
// the lifetime of a task.
class LabelSet {
public:
    explicit LabelSet(std::vector<Label> labels);

    size_t size() const { return labels_.size(); }
    const Label& at(size_t index) const { return labels_.at(index); }
    const std::vector<Label>& labels() const { return labels_; }
    std::vector<std::string> names() const;
    std::optional<size_t> index_of(std::string_view name) const;
    bool contains(std::string_view name) const { return index_of(name).has_value(); }

    bool operator==(const LabelSet& other) const;

private:
    std::vector<Label> labels_;
    std::map<std::string, size_t, std::less<>> index_;
};

enum class Origin { seed, generated, validation };

std::string_view to_string(Origin origin);
std::optional<Origin> origin_from_string(std::string_view s);

struct Example {
    std::string text;
    std::string label;
    Origin origin = Origin::seed;
    int iteration = 0; // 0 = seed/initialization
};

// Ordered collection of labeled texts with an exact-dedup invariant: no two
// stored examples share the same normalize_text key.
class Dataset {
public:
    explicit Dataset(LabelSet labels);

    // Returns false and leaves the dataset unchanged if the normalized text
    // is already present or empty. Throws InvalidLabel for labels outside
    // the label set.
    bool insert(Example example);

    const std::vector<Example>& examples() const { return examples_; }
    size_t size() const { return examples_.size(); }
    bool empty() const { return examples_.empty(); }
    const LabelSet& label_set() const { return labels_; }

    // Every task label appears as a key, zero counts included.
    std::map<std::string, size_t> class_counts() const;
    std::vector<size_t> class_counts_by_index() const;
    size_t distinct_labels_present() const;

    bool contains_normalized(std::string_view normalized_key) const;

    // First n examples as a new dataset (the insert order is append-only, so
    // this reconstructs any historical snapshot).
    Dataset prefix(size_t n) const;

private:
    LabelSet labels_;
    std::vector<Example> examples_;
    std::unordered_set<std::string> index_;
};

// Uniform k-per-class sample, deterministic for a fixed seed. Throws
// InsufficientData if any class has fewer than k members.
Dataset stratified_sample(const Dataset& dataset, size_t per_class, uint64_t seed);

struct ReadResult {
    Dataset dataset;
    size_t skipped_duplicates = 0;
};

// Line-delimited records, one JSON object per line with fields `text` and
// `label` plus optional `origin` and `iteration`. Unknown fields are ignored
// on read and never written. Malformed lines raise ParseError with the
// 1-based line number.
ReadResult read_records(const std::filesystem::path& path, const LabelSet& labels);
// Variant that infers the label set from the file (order of first appearance).
ReadResult read_records(const std::filesystem::path& path);
void write_records(const Dataset& dataset, const std::filesystem::path& path);

struct TaskSpec {
    TaskSpec(LabelSet labels, Dataset seeds, int shots, std::string description);

    // Zero-shot task: label names/descriptions only, no seed data.
    static TaskSpec zero_shot(LabelSet labels, std::string description = {});
    // Few-shot task: exactly `shots` seed examples per label.
    static TaskSpec few_shot(LabelSet labels, Dataset seeds, int shots,
                             std::string description = {});

    LabelSet label_set;
    Dataset seed_examples;
    int shots = 0;
    std::string task_description;
};

} // namespace curator
