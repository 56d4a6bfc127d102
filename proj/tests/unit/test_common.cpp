#include "ava/errors.hpp"
#include "ava/image.hpp"
#include "ava/params.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace ava;

namespace {

ParamSpace mixed_space() {
    return ParamSpace({
        ParamEntry{"opacity", ParamKind::continuous, 0.0, 1.0, {}},
        ParamEntry{"k", ParamKind::integer, 2.0, 9.0, {}},
        ParamEntry{"method", ParamKind::categorical, 0.0, 0.0, {"tsne", "umap"}},
    });
}

}  // namespace

TEST_CASE("param space rejects malformed entries") {
    CHECK_THROWS_AS(ParamSpace({ParamEntry{"a", ParamKind::continuous, 1.0, 0.0, {}}}), InvalidParams);
    CHECK_THROWS_AS(ParamSpace({ParamEntry{"a", ParamKind::continuous, 0.0, 1.0, {}},
                                ParamEntry{"a", ParamKind::continuous, 0.0, 1.0, {}}}),
                    InvalidParams);
    CHECK_THROWS_AS(ParamSpace({ParamEntry{"m", ParamKind::categorical, 0.0, 0.0, {}}}), InvalidParams);
    CHECK_THROWS_AS(ParamSpace({ParamEntry{"", ParamKind::continuous, 0.0, 1.0, {}}}), InvalidParams);
}

TEST_CASE("clamp projects, rounds, defaults and drops") {
    const auto space = mixed_space();
    const auto r = clamp_to_space(space, {{"opacity", 1.7}, {"k", 3.6}, {"bogus", 1.0}});
    CHECK(std::get<double>(r.values.at("opacity")) == 1.0);
    CHECK(std::get<double>(r.values.at("k")) == 4.0);
    CHECK(std::get<std::string>(r.values.at("method")) == "tsne");
    CHECK_FALSE(r.values.count("bogus"));
    // clamp note and dropped-unknown note; defaults for missing entries are silent
    CHECK(r.notes.size() == 2);

    const auto fb = clamp_to_space(space, {{"opacity", 0.25}}, {{"k", 7.0}, {"method", std::string("umap")}});
    CHECK(std::get<double>(fb.values.at("k")) == 7.0);
    CHECK(std::get<std::string>(fb.values.at("method")) == "umap");
    CHECK(fb.notes.empty());

    const auto mid = clamp_to_space(space, {});
    CHECK(std::get<double>(mid.values.at("opacity")) == 0.5);
    CHECK(std::get<double>(mid.values.at("k")) == 5.0);
}

TEST_CASE("clamp output always conforms (property)") {
    const auto space = mixed_space();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> wide(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        ParamVector p;
        if (rng() % 4) p["opacity"] = wide(rng);
        if (rng() % 4) p["k"] = wide(rng);
        if (rng() % 3 == 0) p["method"] = std::string(rng() % 2 ? "umap" : "pca");
        if (rng() % 3 == 0) p["method"] = wide(rng);
        if (rng() % 5 == 0) p["extra"] = 1.0;
        const auto r = clamp_to_space(space, p);
        CHECK_FALSE(check_params(space, r.values).has_value());
        // Values already inside the space are untouched.
        CHECK(clamp_to_space(space, r.values).values == r.values);
    }
}

TEST_CASE("check_params reports wire error codes") {
    const auto space = mixed_space();
    const ParamVector ok{{"opacity", 0.5}, {"k", 3.0}, {"method", std::string("umap")}};
    CHECK_FALSE(check_params(space, ok));

    auto with = [&](const std::string& k, ParamValue v) {
        auto p = ok;
        p[k] = std::move(v);
        return check_params(space, p)->code;
    };
    CHECK(with("extra", 1.0) == "unknown_param");
    CHECK(with("opacity", 1.5) == "param_out_of_bounds");
    CHECK(with("opacity", std::string("x")) == "bad_param_type");
    CHECK(with("k", 3.5) == "bad_param_type");
    CHECK(with("method", std::string("pca")) == "param_out_of_bounds");
    auto missing = ok;
    missing.erase("k");
    CHECK(check_params(space, missing)->code == "missing_param");
}

TEST_CASE("param JSON round trips") {
    const auto space = mixed_space();
    CHECK(param_space_from_json(to_json(space)) == space);
    const ParamVector p{{"opacity", 0.125}, {"k", 3.0}, {"method", std::string("umap")}};
    CHECK(param_vector_from_json(to_json(p)) == p);
    CHECK_THROWS_AS(param_vector_from_json(nlohmann::json::array()), InvalidParams);
    CHECK_THROWS_AS(param_vector_from_json(nlohmann::json{{"a", true}}), InvalidParams);
    CHECK_THROWS_AS(number_of(p, "method"), InvalidParams);
    CHECK_THROWS_AS(number_of(p, "nope"), InvalidParams);
}

TEST_CASE("png codec round trips exactly and deterministically") {
    Image img(17, 9, Rgba{1, 2, 3, 255});
    std::mt19937 rng(3);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            img.set(x, y, Rgba{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                               static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())});
        }
    }
    const auto a = encode_png(img);
    CHECK(a == encode_png(img));
    CHECK(decode_png(a) == img);
    const Bytes junk{1, 2, 3, 4, 5};
    CHECK_THROWS_AS(decode_png(junk), ImageError);
}

TEST_CASE("hash and base64 match published test vectors") {
    const std::string abc = "abc";
    const Bytes b(abc.begin(), abc.end());
    CHECK(content_hash(b) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const std::string foobar = "foobar";
    for (std::size_t n = 0; n <= foobar.size(); ++n) {
        static const char* expected[] = {"", "Zg==", "Zm8=", "Zm9v", "Zm9vYg==", "Zm9vYmE=", "Zm9vYmFy"};
        const Bytes in(foobar.begin(), foobar.begin() + static_cast<long>(n));
        CHECK(base64_encode(in) == expected[n]);
        CHECK(base64_decode(expected[n]) == in);
    }
}
