#include "doctest.h"

#include <cmath>
#include <set>

#include "featurizer.hpp"
#include "oracles.hpp"

using namespace curator;

TEST_CASE("fnv1a64 matches an independent restatement") {
    for (const std::string s : {"", "a", "good", "movie", "good_movie", "déjà"}) {
        CHECK(fnv1a64(s) == oracle::fnv1a64(s));
    }
}

TEST_CASE("featurize on the empty string is the zero vector") {
    FeaturizerSpec spec;
    CHECK(featurize(spec, "").zero());
    CHECK(featurize(spec, " !!! ").zero());
}

TEST_CASE("featurize hashes unigrams and adjacent bigrams") {
    FeaturizerSpec spec;
    SparseVec vec = featurize(spec, "good movie");

    std::set<uint32_t> expected = {
        static_cast<uint32_t>(oracle::fnv1a64("good") % spec.dimension),
        static_cast<uint32_t>(oracle::fnv1a64("movie") % spec.dimension),
        static_cast<uint32_t>(oracle::fnv1a64("good_movie") % spec.dimension),
    };
    REQUIRE(expected.size() == 3); // no collisions for these tokens
    REQUIRE(vec.entries.size() == 3);
    for (const auto& [index, weight] : vec.entries) {
        CHECK(expected.count(index) == 1);
        CHECK(weight == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    }
}

TEST_CASE("featurize is deterministic") {
    FeaturizerSpec spec;
    SparseVec a = featurize(spec, "some sample Text with CASE");
    SparseVec b = featurize(spec, "some sample Text with CASE");
    REQUIRE(a.entries.size() == b.entries.size());
    for (size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].first == b.entries[i].first);
        CHECK(a.entries[i].second == b.entries[i].second); // bitwise
    }
}

TEST_CASE("colliding features accumulate counts before normalization") {
    FeaturizerSpec spec;
    spec.dimension = 2;
    SparseVec vec = featurize(spec, "x y z");
    double total = 0.0;
    for (const auto& [_, w] : vec.entries) {
        total += w * w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vec.entries.size() <= 2);
}

TEST_CASE("ngram orders can be restricted") {
    FeaturizerSpec unigram_only;
    unigram_only.bigrams = false;
    CHECK(featurize(unigram_only, "good movie").entries.size() == 2);

    FeaturizerSpec bigram_only;
    bigram_only.unigrams = false;
    CHECK(featurize(bigram_only, "good movie").entries.size() == 1);
    CHECK(featurize(bigram_only, "good").zero()); // no adjacent pair
}

TEST_CASE("featurizer specs validate bounds") {
    FeaturizerSpec spec;
    spec.dimension = 1;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.dimension = 16;
    spec.unigrams = false;
    spec.bigrams = false;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.unigrams = true;
    spec.hash_algorithm = "md5";
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("sparse dot and norm") {
    SparseVec a{{{1, 1.0}, {3, 2.0}}};
    SparseVec b{{{1, 0.5}, {2, 4.0}, {3, 1.0}}};
    CHECK(a.dot(b) == doctest::Approx(2.5));
    CHECK(a.norm() == doctest::Approx(std::sqrt(5.0)));
}
