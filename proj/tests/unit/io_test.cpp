#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "khess/errors.hpp"
#include "khess/io.hpp"

using namespace khess;

namespace {

std::filesystem::path temp_dir() {
    auto d = std::filesystem::temp_directory_path() / ("khess_io_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST(FormatDouble, RoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 5.783185962946784, -1e-300, 6.02e23}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(2.0), "2");
}

TEST(MatrixJson, AcceptedShapes) {
    auto a = matrix_from_json(Json::parse(R"({"n": 2, "entries": [[1, 2], [2, 3]]})"));
    auto b = matrix_from_json(Json::parse(R"({"n": 2, "entries": [1, 2, 2, 3]})"));
    auto c = matrix_from_json(Json::parse(R"([[1, 2], [2, 3]])"));
    for (const auto* m : {&a, &b, &c}) {
        ASSERT_EQ(m->size(), 2);
        EXPECT_EQ((*m)(0, 1), 2.0);
        EXPECT_EQ((*m)(1, 1), 3.0);
    }
    auto back = matrix_from_json(matrix_to_json(a));
    EXPECT_EQ(back(1, 0), 2.0);
}

TEST(MatrixJson, Rejects) {
    EXPECT_THROW(matrix_from_json(Json::parse(R"([[1, 2], [0, 3]])")), DomainError);
    EXPECT_THROW(matrix_from_json(Json::parse(R"({"n": 3, "entries": [1, 2, 2, 3]})")), DomainError);
    EXPECT_THROW(matrix_from_json(Json::parse(R"({"n": 2})")), DomainError);
    EXPECT_THROW(matrix_from_json(Json::parse(R"("hello")")), DomainError);
    EXPECT_THROW(read_matrix_file("/nonexistent/khess.json"), DomainError);
}

TEST(ProfileIo, CsvRoundTrip) {
    auto p = quartic_test_profile(1.3, 3, 2, 64);
    std::stringstream ss;
    write_profile_csv(ss, p);
    EXPECT_EQ(ss.str().substr(0, 11), "r,h,hp,hpp\n");
    auto q = read_profile_csv(ss, 3, 2);
    ASSERT_EQ(q.size(), p.size());
    EXPECT_EQ(q.radius, p.radius);
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_EQ(q.r[i], p.r[i]);
        EXPECT_EQ(q.h[i], p.h[i]);
        EXPECT_EQ(q.hp[i], p.hp[i]);
        EXPECT_EQ(q.hpp[i], p.hpp[i]);
    }
    const auto path = (temp_dir() / "p.csv").string();
    write_profile_csv(path, p);
    EXPECT_EQ(read_profile_csv(path, 3, 2).h, p.h);
}

TEST(ProfileIo, JsonRoundTrip) {
    auto p = quartic_test_profile(1.0, 2, 1, 64);
    auto q = profile_from_json(profile_to_json(p));
    EXPECT_EQ(q.dim, 2);
    EXPECT_EQ(q.order, 1);
    EXPECT_EQ(q.h, p.h);
    EXPECT_EQ(q.hpp, p.hpp);
}

TEST(ProfileIo, RejectsBadCsv) {
    std::stringstream bad("r,h,hp,hpp\n0,1,2\n");
    EXPECT_THROW(read_profile_csv(bad, 2, 1), DomainError);
    std::stringstream nan("r,h,hp,hpp\n0,nan,0,0\n1,0,0,0\n");
    EXPECT_THROW(read_profile_csv(nan, 2, 1), DomainError);
}

TEST(SourceIo, Csv) {
    std::stringstream ss("r,f\n0,1\n0.5,2\n1,3\n");
    auto f = read_source_csv(ss);
    EXPECT_DOUBLE_EQ(f(0.25), 1.5);
    EXPECT_DOUBLE_EQ(f(1.0), 3.0);
}

TEST(FieldIo, RoundTrip) {
    auto field = sphere_field(2.0, 3, 8, 1);
    auto back = field_from_json(field_to_json(field));
    ASSERT_EQ(back.samples().size(), 8u);
    EXPECT_EQ(back.dim(), 3);
    EXPECT_DOUBLE_EQ(back.samples()[3].kappa[1], 0.5);

    auto bare = field_from_json(Json::parse(R"([{"kappa": [1, 2]}, {"kappa": [3, 4]}])"));
    EXPECT_EQ(bare.dim(), 3);
    EXPECT_THROW(field_from_json(Json::parse(R"([{"kappa": [1, 2]}, {"kappa": [3]}])")), DomainError);
}

TEST(EstimateJson, Keys) {
    SpectralEstimate e;
    e.dim = 2;
    e.order = 1;
    e.radius = 1.0;
    e.lambda_best = 5.78;
    e.probes.push_back({3.0, IterationStatus::converged, 12, 0.5, 0.4});
    auto j = estimate_to_json(e, "x.csv");
    for (const char* key : {"N", "k", "R", "lambda_lo", "lambda_hi", "lambda_best", "bounds", "bisect_tol",
                            "rayleigh", "residual_max", "profile_ref", "probes", "log"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_FALSE(j.contains("holder_seminorm"));
    EXPECT_EQ(j["probes"][0]["status"], "converged");
    e.holder = 0.3;
    EXPECT_EQ(estimate_to_json(e, "")["holder_seminorm"], 0.3);
}

TEST(TextFile, RoundTrip) {
    const auto path = (temp_dir() / "t.txt").string();
    write_text_file(path, "abc\n");
    EXPECT_EQ(read_text_file(path), "abc\n");
    EXPECT_THROW(read_text_file("/nonexistent/x"), DomainError);
}
