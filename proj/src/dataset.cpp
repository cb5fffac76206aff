#include "dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "json.hpp"
#include "text_norm.hpp"

namespace curator {

namespace {

std::string trimmed(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

LabelSet::LabelSet(std::vector<Label> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) {
        throw ValidationError("a label set requires at least 2 labels");
    }
    for (size_t i = 0; i < labels_.size(); ++i) {
        if (trimmed(labels_[i].name).empty()) {
            throw ValidationError("label names must be non-empty after trimming");
        }
        if (!index_.emplace(labels_[i].name, i).second) {
            throw ValidationError("duplicate label name: \"" + labels_[i].name + "\"");
        }
    }
}

std::vector<std::string> LabelSet::names() const {
    std::vector<std::string> out;
    out.reserve(labels_.size());
    for (const auto& l : labels_) {
        out.push_back(l.name);
    }
    return out;
}

std::optional<size_t> LabelSet::index_of(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool LabelSet::operator==(const LabelSet& other) const {
    if (labels_.size() != other.labels_.size()) {
        return false;
    }
    for (size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i].name != other.labels_[i].name) {
            return false;
        }
    }
    return true;
}

std::string_view to_string(Origin origin) {
    switch (origin) {
    case Origin::seed: return "seed";
    case Origin::generated: return "generated";
    case Origin::validation: return "validation";
    }
    return "seed";
}

std::optional<Origin> origin_from_string(std::string_view s) {
    if (s == "seed") return Origin::seed;
    if (s == "generated") return Origin::generated;
    if (s == "validation") return Origin::validation;
    return std::nullopt;
}

Dataset::Dataset(LabelSet labels) : labels_(std::move(labels)) {}

bool Dataset::insert(Example example) {
    if (!labels_.contains(example.label)) {
        throw InvalidLabel(example.label);
    }
    std::string key = normalize_text(example.text);
    if (key.empty() || index_.count(key) > 0) {
        return false;
    }
    index_.insert(std::move(key));
    examples_.push_back(std::move(example));
    return true;
}

std::map<std::string, size_t> Dataset::class_counts() const {
    std::map<std::string, size_t> counts;
    for (const auto& l : labels_.labels()) {
        counts[l.name] = 0;
    }
    for (const auto& ex : examples_) {
        ++counts[ex.label];
    }
    return counts;
}

std::vector<size_t> Dataset::class_counts_by_index() const {
    std::vector<size_t> counts(labels_.size(), 0);
    for (const auto& ex : examples_) {
        ++counts[*labels_.index_of(ex.label)];
    }
    return counts;
}

size_t Dataset::distinct_labels_present() const {
    size_t n = 0;
    for (size_t c : class_counts_by_index()) {
        if (c > 0) {
            ++n;
        }
    }
    return n;
}

bool Dataset::contains_normalized(std::string_view normalized_key) const {
    return index_.count(std::string(normalized_key)) > 0;
}

Dataset Dataset::prefix(size_t n) const {
    Dataset out(labels_);
    n = std::min(n, examples_.size());
    for (size_t i = 0; i < n; ++i) {
        out.insert(examples_[i]);
    }
    return out;
}

Dataset stratified_sample(const Dataset& dataset, size_t per_class, uint64_t seed) {
    const LabelSet& labels = dataset.label_set();
    std::vector<std::vector<size_t>> by_class(labels.size());
    for (size_t i = 0; i < dataset.size(); ++i) {
        by_class[*labels.index_of(dataset.examples()[i].label)].push_back(i);
    }
    for (size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].size() < per_class) {
            throw InsufficientData("class \"" + labels.at(c).name + "\" has " +
                                   std::to_string(by_class[c].size()) + " examples, need " +
                                   std::to_string(per_class));
        }
    }

    // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is
    // implementation-defined, this selection is stable across toolchains.
    std::mt19937_64 rng(seed);
    Dataset out(labels);
    for (auto& pool : by_class) {
        for (size_t i = 0; i + 1 < pool.size(); ++i) {
            size_t j = i + static_cast<size_t>(rng() % (pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        for (size_t i = 0; i < per_class; ++i) {
            out.insert(dataset.examples()[pool[i]]);
        }
    }
    return out;
}

namespace {

struct RawRecord {
    Example example;
    int line = 0;
};

std::vector<RawRecord> parse_record_lines(const std::filesystem::path& path,
                                          std::vector<std::string>* label_order) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<RawRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) {
            continue;
        }
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            throw ParseError(line_no, "not a JSON object");
        }
        if (!obj.contains("text") || !obj["text"].is_string()) {
            throw ParseError(line_no, "missing or non-string \"text\" field");
        }
        if (!obj.contains("label") || !obj["label"].is_string()) {
            throw ParseError(line_no, "missing or non-string \"label\" field");
        }
        Example ex;
        ex.text = obj["text"].get<std::string>();
        ex.label = obj["label"].get<std::string>();
        if (obj.contains("origin")) {
            if (!obj["origin"].is_string()) {
                throw ParseError(line_no, "non-string \"origin\" field");
            }
            auto origin = origin_from_string(obj["origin"].get<std::string>());
            if (!origin) {
                throw ParseError(line_no, "unknown origin \"" +
                                              obj["origin"].get<std::string>() + "\"");
            }
            ex.origin = *origin;
        }
        if (obj.contains("iteration")) {
            if (!obj["iteration"].is_number_integer() || obj["iteration"].get<int>() < 0) {
                throw ParseError(line_no, "\"iteration\" must be a non-negative integer");
            }
            ex.iteration = obj["iteration"].get<int>();
        }
        if (label_order != nullptr &&
            std::find(label_order->begin(), label_order->end(), ex.label) ==
                label_order->end()) {
            label_order->push_back(ex.label);
        }
        records.push_back({std::move(ex), line_no});
    }
    return records;
}

ReadResult insert_records(LabelSet labels, const std::vector<RawRecord>& records) {
    ReadResult result{Dataset(std::move(labels)), 0};
    for (const auto& rec : records) {
        if (!result.dataset.insert(rec.example)) {
            ++result.skipped_duplicates;
        }
    }
    return result;
}

} // namespace

ReadResult read_records(const std::filesystem::path& path, const LabelSet& labels) {
    auto records = parse_record_lines(path, nullptr);
    return insert_records(labels, records);
}

ReadResult read_records(const std::filesystem::path& path) {
    std::vector<std::string> label_order;
    auto records = parse_record_lines(path, &label_order);
    std::vector<Label> labels;
    labels.reserve(label_order.size());
    for (auto& name : label_order) {
        labels.push_back({std::move(name), {}});
    }
    return insert_records(LabelSet(std::move(labels)), records);
}

void write_records(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    for (const auto& ex : dataset.examples()) {
        nlohmann::json obj = {
            {"text", ex.text},
            {"label", ex.label},
            {"origin", std::string(to_string(ex.origin))},
            {"iteration", ex.iteration},
        };
        out << obj.dump() << '\n';
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

TaskSpec::TaskSpec(LabelSet labels, Dataset seeds, int shots_, std::string description)
    : label_set(std::move(labels)),
      seed_examples(std::move(seeds)),
      shots(shots_),
      task_description(std::move(description)) {
    if (!(label_set == seed_examples.label_set())) {
        throw ValidationError("seed dataset label set differs from the task label set");
    }
    if (shots < 0) {
        throw ValidationError("shots must be >= 0");
    }
    if (shots == 0) {
        if (!seed_examples.empty()) {
            throw ValidationError("zero-shot task must have no seed examples");
        }
        return;
    }
    for (const auto& [name, count] : seed_examples.class_counts()) {
        if (count != static_cast<size_t>(shots)) {
            throw ValidationError("label \"" + name + "\" has " + std::to_string(count) +
                                  " seed examples, expected " + std::to_string(shots));
        }
    }
}

TaskSpec TaskSpec::zero_shot(LabelSet labels, std::string description) {
    Dataset empty(labels);
    return TaskSpec(std::move(labels), std::move(empty), 0, std::move(description));
}

TaskSpec TaskSpec::few_shot(LabelSet labels, Dataset seeds, int shots,
                            std::string description) {
    return TaskSpec(std::move(labels), std::move(seeds), shots, std::move(description));
}

} // namespace curator
