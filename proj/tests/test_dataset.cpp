#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "dataset.hpp"
#include "text_norm.hpp"

using namespace curator;

namespace {

LabelSet sentiment_labels() {
    return LabelSet({{"pos", "positive sentiment"}, {"neg", "negative sentiment"}});
}

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "curator-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("normalize_text applies the folding rules") {
    CHECK(normalize_text("  The  Movie!! ") == "the movie");
    CHECK(normalize_text("Déjà-Vu 2") == "déjà vu 2");
    CHECK(normalize_text("") == "");
    CHECK(normalize_text("   !!! ") == "");
    CHECK(normalize_text("Great PHONE") == "great phone");
    // compatibility forms fold onto their plain equivalents
    CHECK(normalize_text("ＦＵＬＬｗｉｄｔｈ １２") == "fullwidth 12");
}

TEST_CASE("normalize_text is idempotent on fuzzed strings") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick(0, 9);
    const std::vector<std::string> pieces = {
        "Hello",   "WORLD",  "déjà",    "!!!",   "  ",
        "Ｔｅｓｔ", "n°5",    "ﬁnal",    "é",     "99",
    };
    for (int i = 0; i < 200; ++i) {
        std::string s;
        int parts = 1 + pick(rng) % 6;
        for (int p = 0; p < parts; ++p) {
            s += pieces[static_cast<size_t>(pick(rng))];
        }
        std::string once = normalize_text(s);
        CHECK(normalize_text(once) == once);
    }
}

TEST_CASE("label sets validate their invariants") {
    CHECK_THROWS_AS(LabelSet({{"only", ""}}), ValidationError);
    CHECK_THROWS_AS(LabelSet({{"a", ""}, {"a", ""}}), ValidationError);
    CHECK_THROWS_AS(LabelSet({{"a", ""}, {"   ", ""}}), ValidationError);
    LabelSet labels = sentiment_labels();
    CHECK(labels.index_of("pos") == 0);
    CHECK(labels.index_of("neg") == 1);
    CHECK_FALSE(labels.index_of("nope").has_value());
}

TEST_CASE("insert deduplicates by normalized form") {
    Dataset data(sentiment_labels());
    CHECK(data.insert({"Great phone!", "pos", Origin::seed, 0}));
    CHECK_FALSE(data.insert({"great phone", "pos", Origin::seed, 0}));
    CHECK(data.size() == 1);

    SUBCASE("unknown label raises") {
        CHECK_THROWS_AS(data.insert({"text", "joyy", Origin::seed, 0}), InvalidLabel);
    }
    SUBCASE("text that normalizes to empty is rejected") {
        CHECK_FALSE(data.insert({"   !!! ", "pos", Origin::seed, 0}));
        CHECK(data.size() == 1);
    }
}

TEST_CASE("class_counts covers every label and sums to size") {
    Dataset data(sentiment_labels());
    SUBCASE("empty dataset") {
        auto counts = data.class_counts();
        CHECK(counts.at("pos") == 0);
        CHECK(counts.at("neg") == 0);
    }
    SUBCASE("mixed inserts and rejects") {
        data.insert({"a one", "pos", Origin::seed, 0});
        data.insert({"a two", "pos", Origin::seed, 0});
        data.insert({"a three", "pos", Origin::seed, 0});
        data.insert({"b one", "neg", Origin::seed, 0});
        auto counts = data.class_counts();
        CHECK(counts.at("pos") == 3);
        CHECK(counts.at("neg") == 1);

        CHECK_FALSE(data.insert({"A ONE", "pos", Origin::seed, 0}));
        counts = data.class_counts();
        CHECK(counts.at("pos") == 3);
        CHECK(counts.at("pos") + counts.at("neg") == data.size());
    }
}

TEST_CASE("class_counts sums to size under fuzzed insert sequences") {
    std::mt19937_64 rng(11);
    Dataset data(sentiment_labels());
    for (int i = 0; i < 300; ++i) {
        std::string text = "item " + std::to_string(rng() % 120);
        std::string label = (rng() % 2 == 0) ? "pos" : "neg";
        data.insert({text, label, Origin::seed, 0});
        auto counts = data.class_counts();
        size_t total = 0;
        for (const auto& [_, c] : counts) {
            total += c;
        }
        CHECK(total == data.size());
    }
}

TEST_CASE("stratified_sample") {
    Dataset data(sentiment_labels());
    for (int i = 0; i < 5; ++i) {
        data.insert({"pos sample " + std::to_string(i), "pos", Origin::seed, 0});
        data.insert({"neg sample " + std::to_string(i), "neg", Origin::seed, 0});
    }

    SUBCASE("k = 0 gives an empty dataset") {
        CHECK(stratified_sample(data, 0, 1).size() == 0);
    }
    SUBCASE("k = 2 gives exactly two per class") {
        Dataset sample = stratified_sample(data, 2, 42);
        CHECK(sample.size() == 4);
        CHECK(sample.class_counts().at("pos") == 2);
        CHECK(sample.class_counts().at("neg") == 2);
    }
    SUBCASE("identical seeds give identical selections") {
        Dataset a = stratified_sample(data, 3, 9);
        Dataset b = stratified_sample(data, 3, 9);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a.examples()[i].text == b.examples()[i].text);
        }
    }
    SUBCASE("insufficient class members raise") {
        CHECK_THROWS_AS(stratified_sample(data, 6, 1), InsufficientData);
    }
    SUBCASE("k equal to the class counts returns the whole dataset as a set") {
        Dataset sample = stratified_sample(data, 5, 123);
        REQUIRE(sample.size() == data.size());
        std::set<std::string> in;
        std::set<std::string> out;
        for (const auto& ex : data.examples()) {
            in.insert(ex.text);
        }
        for (const auto& ex : sample.examples()) {
            out.insert(ex.text);
        }
        CHECK(in == out);
    }
}

TEST_CASE("record files round-trip and report problems by line") {
    auto path = temp_file("roundtrip.jsonl");

    SUBCASE("write then read returns an equal dataset") {
        Dataset data(sentiment_labels());
        data.insert({"love it", "pos", Origin::generated, 2});
        data.insert({"hate it", "neg", Origin::validation, 0});
        write_records(data, path);
        ReadResult read = read_records(path, sentiment_labels());
        REQUIRE(read.dataset.size() == data.size());
        CHECK(read.skipped_duplicates == 0);
        for (size_t i = 0; i < data.size(); ++i) {
            CHECK(read.dataset.examples()[i].text == data.examples()[i].text);
            CHECK(read.dataset.examples()[i].label == data.examples()[i].label);
            CHECK(read.dataset.examples()[i].origin == data.examples()[i].origin);
            CHECK(read.dataset.examples()[i].iteration == data.examples()[i].iteration);
        }
    }

    SUBCASE("duplicate texts collapse with a skip count") {
        std::ofstream out(path, std::ios::trunc);
        out << R"({"text": "Great phone!", "label": "pos"})" << "\n";
        out << R"({"text": "great phone", "label": "pos"})" << "\n";
        out.close();
        ReadResult read = read_records(path, sentiment_labels());
        CHECK(read.dataset.size() == 1);
        CHECK(read.skipped_duplicates == 1);
    }

    SUBCASE("missing label field reports its line") {
        std::ofstream out(path, std::ios::trunc);
        out << R"({"text": "one", "label": "pos"})" << "\n";
        out << R"({"text": "two", "label": "neg"})" << "\n";
        out << R"({"text": "three"})" << "\n";
        out.close();
        try {
            read_records(path, sentiment_labels());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }

    SUBCASE("unknown fields are ignored on read") {
        std::ofstream out(path, std::ios::trunc);
        out << R"({"text": "one", "label": "pos", "score": 0.7})" << "\n";
        out.close();
        ReadResult read = read_records(path, sentiment_labels());
        CHECK(read.dataset.size() == 1);
    }

    SUBCASE("label inference follows first appearance") {
        std::ofstream out(path, std::ios::trunc);
        out << R"({"text": "one", "label": "b"})" << "\n";
        out << R"({"text": "two", "label": "a"})" << "\n";
        out.close();
        ReadResult read = read_records(path);
        CHECK(read.dataset.label_set().at(0).name == "b");
        CHECK(read.dataset.label_set().at(1).name == "a");
    }
}

TEST_CASE("task specs enforce the shots invariant") {
    LabelSet labels = sentiment_labels();
    Dataset seeds(labels);
    seeds.insert({"good", "pos", Origin::seed, 0});
    seeds.insert({"bad", "neg", Origin::seed, 0});

    CHECK_NOTHROW(TaskSpec::few_shot(labels, seeds, 1));
    CHECK_NOTHROW(TaskSpec::zero_shot(labels));
    CHECK_THROWS_AS(TaskSpec::few_shot(labels, seeds, 2), ValidationError);
    CHECK_THROWS_AS(TaskSpec(labels, seeds, 0, ""), ValidationError);
}

TEST_CASE("prefix reconstructs historical snapshots") {
    Dataset data(sentiment_labels());
    data.insert({"one good", "pos", Origin::seed, 0});
    data.insert({"one bad", "neg", Origin::generated, 1});
    data.insert({"two good", "pos", Origin::generated, 2});

    Dataset snap = data.prefix(2);
    CHECK(snap.size() == 2);
    CHECK(snap.examples()[1].text == "one bad");
    CHECK(data.prefix(99).size() == 3);
}
