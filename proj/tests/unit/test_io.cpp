#include "oracles.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

using namespace lrvlab;

namespace {

CsvData parse(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in, "t.csv");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const DomainError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("csv header is detected from a non-numeric first record") {
    auto a = parse("x\n1\n2\n3\n");
    CHECK(a.header == std::vector<std::string>{"x"});
    CHECK(a.series.size() == 3);
    auto b = parse("1\n2\n3\n");
    CHECK(b.header.empty());
    CHECK(b.series.size() == 3);
    CHECK(b.series(2) == 3.0);
}

TEST_CASE("csv follows quoting and line-ending rules") {
    auto a = parse("\"a,b\",\"say \"\"hi\"\"\"\r\n1.5,\"2\"\r\n-3e2, +4 \r\n");
    REQUIRE(a.header.size() == 2);
    CHECK(a.header[0] == "a,b");
    CHECK(a.header[1] == "say \"hi\"");
    CHECK(a.series.dims() == 2);
    CHECK(a.series.size() == 2);
    CHECK(a.series(0, 1) == 2.0);
    CHECK(a.series(1, 0) == -300.0);
    CHECK(a.series(1, 1) == 4.0);
    auto b = parse("1\n2\n\n\n");
    CHECK(b.series.size() == 2);
    auto c = parse("\xEF\xBB\xBFv\n1\n2\n");
    CHECK(c.header == std::vector<std::string>{"v"});
}

TEST_CASE("missing and malformed cells are rejected with their position") {
    auto na = error_of("a,b\n1,2\n3,NA\n5,6\n");
    CHECK(na.find("record 3") != std::string::npos);
    CHECK(na.find("column 2") != std::string::npos);
    CHECK(na.find("missing") != std::string::npos);
    auto empty = error_of("1,2\n3,\n");
    CHECK(empty.find("record 2") != std::string::npos);
    CHECK(empty.find("column 2") != std::string::npos);
    auto text = error_of("1\n2\nabc\n");
    CHECK(text.find("record 3") != std::string::npos);
    CHECK(text.find("cannot parse") != std::string::npos);
    auto ragged = error_of("1,2\n3\n");
    CHECK(ragged.find("record 2") != std::string::npos);
    CHECK_FALSE(error_of("1\ninf\n").empty());
    CHECK_FALSE(error_of("").empty());
    CHECK_FALSE(error_of("x\n").empty());
    CHECK_FALSE(error_of("\"1\n2\n").empty());
    CHECK_THROWS_AS(parse("1\n"), InsufficientDataError);
}

TEST_CASE("csv writer round-trips every bit") {
    auto v = oracle::normal_series(300, 5);
    v[0] = 1.0 / 3.0;
    v[1] = 1e-300;
    v[2] = -0.0;
    v[3] = std::numeric_limits<double>::max();
    v[4] = std::numeric_limits<double>::denorm_min();
    const TimeSeries x(v, 3);
    std::stringstream ss;
    write_csv(ss, x, {"a", "b,c", "d"});
    const auto back = read_csv(ss, "rt");
    CHECK(back.header == std::vector<std::string>{"a", "b,c", "d"});
    REQUIRE(back.series.size() == x.size());
    REQUIRE(back.series.dims() == 3);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(std::memcmp(&back.series.data()[i], &v[i], sizeof(double)) == 0);
}

TEST_CASE("toml configs convert to json") {
    const auto j = parse_toml(R"(
experiment = "mse"
n = 400
estimators = ["proposal-m1", "proposal-m3"]
[noise]
kind = "tar"
theta1 = 0.4
normalize = true
)");
    CHECK(j.at("experiment") == "mse");
    CHECK(j.at("n").get<int>() == 400);
    CHECK(j.at("estimators").size() == 2);
    CHECK(j.at("noise").at("theta1").get<double>() == 0.4);
    CHECK(j.at("noise").at("normalize").get<bool>());
    CHECK_THROWS_AS(parse_toml("n = = 3"), ConfigError);
}

TEST_CASE("json documents carry the schema tag") {
    const auto seq = optimal_sequence(3);
    nlohmann::json js = seq;
    CHECK(js.at("m") == 3);
    CHECK(js.at("d").size() == 4);
    CHECK(js.at("deltas").size() == 4);
    CHECK(js.at("deltas")[1].get<double>() == doctest::Approx(-1.0 / 6.0));

    EstimatorConfig c;
    c.seq = seq;
    c.kernel = Kernel::parzen_poly(2);
    c.ell = 5;
    c.h = 10;
    const auto r = lrv(TimeSeries(oracle::normal_series(200, 2)), c);
    const auto doc = document("lrv_estimate", r);
    CHECK(doc.at("schema") == "lrvlab/1");
    CHECK(doc.at("kind") == "lrv_estimate");
    CHECK(doc.at("gamma_d").size() == 5);
    CHECK(doc.at("value").get<double>() == r.value);
    CHECK(doc.at("regime") == "optimal");
    CHECK(doc.at("config").at("kernel") == "parzen_poly:q=2");

    TestResult t{1.5, 1.358, 0.05, true, 2.0, 17};
    const auto dt = document("test_result", t);
    CHECK(dt.at("reject") == true);
    CHECK(dt.at("location") == 17);

    const auto wrapped = document("rows", nlohmann::json::array({1, 2}));
    CHECK(wrapped.at("result").size() == 2);
}
