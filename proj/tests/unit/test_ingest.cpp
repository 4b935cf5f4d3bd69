#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vaxcast/error.hpp"
#include "vaxcast/ingest/clinical.hpp"
#include "vaxcast/ingest/csv.hpp"
#include "vaxcast/ingest/keywords.hpp"
#include "vaxcast/ingest/trends.hpp"

using namespace vaxcast;
using namespace vaxcast::ingest;

namespace {

DatedSeries clinical(const std::string& text) {
    std::istringstream in(text);
    return parse_clinical_csv(in, "c.csv");
}

std::size_t parse_error_line(const std::string& text) {
    try {
        clinical(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

TrendsBatch trends(const std::string& text, const std::string& source = "t.csv") {
    std::istringstream in(text);
    return parse_trends_csv(in, source);
}

std::string batch_text(const std::vector<std::string>& queries, const std::vector<std::vector<double>>& cols) {
    std::string out = "date";
    for (const auto& q : queries) out += "," + q;
    out += ",Joker\n";
    const std::size_t days = cols.front().size();
    for (std::size_t t = 0; t < days; ++t) {
        out += (fixture::kStart + static_cast<long>(t)).iso();
        for (const auto& c : cols) out += "," + format_number(c[t]);
        out += "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("csv primitives") {
    CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split_csv_line("\"x,y\",\"say \"\"hi\"\"\"") == std::vector<std::string>{"x,y", "say \"hi\""});
    CHECK(parse_number("1.5") == 1.5);
    CHECK(parse_number("-2e3") == -2000.0);
    CHECK_FALSE(parse_number("1.5x"));
    CHECK_FALSE(parse_number(""));
    CHECK_FALSE(parse_number("nan"));
    CHECK_FALSE(parse_number("inf"));
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1234567.0) == "1234567");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333");

    std::istringstream in("a,b\n1,2\n\n3\n");
    const auto t = read_csv(in, "x.csv");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.lines == std::vector<std::size_t>{2, 4});
    try {
        t.require_rectangular();
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("x.csv:4") == 0);
    }
    CHECK_THROWS_WITH_AS(read_csv_file("/nonexistent/file.csv"), doctest::Contains("/nonexistent/file.csv"),
                         DomainError);
}

TEST_CASE("clinical csv") {
    const auto s = clinical("date,first_doses\n2021-01-01,10\n2021-01-02,12.5\n2021-01-03,0\n");
    CHECK(s.start_date() == fixture::kStart);
    CHECK(s.size() == 3);
    CHECK(s[1] == 12.5);
    CHECK(s.name() == "first_doses");

    CHECK(parse_error_line("date,first_doses\n2021-01-01,10\n2021-01-02,-1\n") == 3);
    CHECK(parse_error_line("date,first_doses\n2021-01-01,10\n2021-01-01,11\n") == 3);
    CHECK(parse_error_line("date,first_doses\n2021-01-02,10\n2021-01-01,11\n") == 3);
    CHECK(parse_error_line("date,first_doses\n2021-13-01,10\n") == 2);
    CHECK(parse_error_line("date,first_doses\n2021-01-01,ten\n") == 2);
    CHECK(parse_error_line("when,first_doses\n2021-01-01,10\n") == 1);
    CHECK_THROWS_AS(clinical("date,first_doses\n"), ParseError);
    CHECK_THROWS_WITH_AS(clinical("date,first_doses\n2021-01-01,10\n2021-01-04,11\n"),
                         doctest::Contains("2021-01-02"), DomainError);

    const std::string csv = series_csv(s, "first_doses");
    CHECK(csv == "date,first_doses\n2021-01-01,10\n2021-01-02,12.5\n2021-01-03,0\n");
    CHECK(clinical(csv) == s);
}

TEST_CASE("trends csv, censoring and validation") {
    const auto b = trends("date,a,b,Joker\n2021-01-01,10,<1,50\n2021-01-02,0,3,52.5\n");
    CHECK(b.columns == std::vector<std::string>{"a", "b", "Joker"});
    CHECK(b.days() == 2);
    CHECK(b.reference_index() == 2);
    CHECK(std::get<Censored>(b.cells[1][0]).marker == "<1");
    CHECK(std::get<double>(b.cells[2][1]) == 52.5);
    CHECK(b.end_date() == fixture::kStart + 1);

    const auto r = repair_censoring(b);
    CHECK(r.repairs == 1);
    CHECK(std::get<double>(r.batch.cells[1][0]) == 0.5);
    CHECK(repair_censoring(r.batch).repairs == 0);
    CHECK_THROWS_AS(repair_censoring(trends("date,a,Joker\n2021-01-01,<5,1\n")), ParseError);

    CHECK_THROWS_AS(trends("date,a,b\n2021-01-01,1,2\n"), DomainError);
    CHECK_THROWS_AS(trends("date,a,b,c,d,e,Joker\n2021-01-01,1,2,3,4,5,6\n"), DomainError);
    CHECK_THROWS_AS(trends("date,a,Joker\n2021-01-01,101,2\n"), ParseError);
    CHECK_THROWS_AS(trends("date,a,Joker\n2021-01-01,-1,2\n"), ParseError);
    CHECK_THROWS_AS(trends("date,a,Joker\n2021-01-01,1,2\n2021-01-03,1,2\n"), ParseError);
    CHECK_THROWS_AS(trends("date,a,Joker\n2021-01-01,1\n"), ParseError);
    CHECK_THROWS_AS(standardize_batches({b}), DomainError);
}

TEST_CASE("batch standardization") {
    const auto b0 = trends(batch_text({"a"}, {{4, 8}, {10, 30}}), "b0");
    const auto b1 = trends(batch_text({"b", "c"}, {{6, 2}, {1, 3}, {40, 40}}), "b1");
    const auto out = standardize_batches({b0, b1});
    REQUIRE(out.size() == 3);
    CHECK(out.at("a").values()[1] == 8.0);
    // reference means 20 and 40: batch 1 is halved
    CHECK(out.at("b")[0] == 3.0);
    CHECK(out.at("c")[1] == 1.5);
    CHECK_FALSE(out.contains("Joker"));

    // rescaling a batch (reference included) leaves the result unchanged
    for (double k : {0.5, 2.0, 1.7}) {
        const auto scaled = trends(batch_text({"b", "c"}, {{6 * k, 2 * k}, {1 * k, 3 * k}, {40 * k, 40 * k}}), "b1");
        const auto again = standardize_batches({b0, scaled});
        for (const char* q : {"b", "c"}) {
            for (std::size_t t = 0; t < 2; ++t) CHECK(again.at(q)[t] == doctest::Approx(out.at(q)[t]).epsilon(1e-12));
        }
    }

    const auto dup = trends(batch_text({"a"}, {{1, 1}, {5, 5}}), "dup");
    CHECK_THROWS_AS(standardize_batches({b0, dup}), DomainError);
    const auto zero = trends(batch_text({"z"}, {{1, 1}, {0, 0}}), "zero");
    CHECK_THROWS_AS(standardize_batches({b0, zero}), DomainError);
    std::string shifted = batch_text({"s"}, {{1, 1, 1}, {5, 5, 5}});
    CHECK_THROWS_AS(standardize_batches({b0, trends(shifted, "s")}), DomainError);
}

TEST_CASE("categories and aggregation") {
    const auto map = CategoryMap::from_json(R"({"positive":["a","b"],"neutral":["c"],"negative":["d"]})");
    CHECK(map.of(Attitude::positive) == std::vector<std::string>{"a", "b"});
    CHECK_NOTHROW(map.validate(0));
    CHECK_THROWS_AS(map.validate(12), DomainError);
    CHECK_THROWS_AS(CategoryMap::from_json(R"({"positive":["a"],"neutral":["a"],"negative":["d"]})").validate(0),
                    DomainError);
    CHECK_THROWS_AS(CategoryMap::from_json(R"({"positive":["a"],"neutral":["b"]})"), ParseError);
    CHECK_THROWS_AS(CategoryMap::from_json("{oops"), ParseError);
    CHECK(series_name(Attitude::positive) == "pt");
    CHECK(series_name(Attitude::neutral) == "nt");
    CHECK(series_name(Attitude::negative) == "ng");

    std::map<std::string, DatedSeries> std_series{{"a", fixture::series({1, 2})},
                                                  {"b", fixture::series({10, 20})},
                                                  {"c", fixture::series({3, 3})},
                                                  {"d", fixture::series({0.5, 0})}};
    const auto agg = aggregate_categories(std_series, map);
    CHECK(agg[0].values()[0] == 11.0);
    CHECK(agg[0].values()[1] == 22.0);
    CHECK(agg[0].name() == "pt");
    CHECK(agg[1][0] == 3.0);
    CHECK(agg[2][0] == 0.5);
    std_series.erase("c");
    CHECK_THROWS_WITH_AS(aggregate_categories(std_series, map), doctest::Contains("'c'"), DomainError);

    const auto real = CategoryMap::load(SOURCE_DIR "/data/categories.json");
    CHECK_NOTHROW(real.validate());
}

TEST_CASE("keyword counts") {
    const std::vector<std::string> docs{"Vaccine appointment booked! #vaccine https://x.co/abc",
                                        "the VACCINE works, 2021 @clinic www.example.org",
                                        "appointment appointment done"};
    const auto t = corpus_keywords(docs, 2);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == KeywordRow{"appointment", 3});
    CHECK(t.rows[1] == KeywordRow{"vaccine", 3});
    CHECK(keyword_csv(t) == "token,frequency\nappointment,3\nvaccine,3\n");
    CHECK(is_stopword("the"));
    CHECK_FALSE(is_stopword("vaccine"));
    CHECK_FALSE(stopwords_version().empty());

    const auto one = corpus_keywords(std::vector<std::string>{"ÉCOLE école caf\xC3\xA9\xFF caf\xC3\xA9"}, 1);
    CHECK(one.invalid_bytes == 1);
    bool found = false;
    for (const auto& r : one.rows) {
        if (r.token == "\xC3\xA9" "cole") {
            CHECK(r.frequency == 2);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("keyword counts match a brute-force recount on ASCII text") {
    Rng rng(7);
    const std::vector<std::string> vocab{"dose", "Dose", "the",  "and", "shot", "12",  "jab",   "pfizer",
                                         "#jab", "@cdc", "a1",   "is",  "clinic", "http://t.co/z", "www.x.y", "ok!"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::string> docs;
        for (int d = 0; d < 15; ++d) {
            std::string doc;
            const int words = 1 + static_cast<int>(rng.uniform() * 12);
            for (int w = 0; w < words; ++w) {
                doc += vocab[static_cast<std::size_t>(rng.uniform() * static_cast<double>(vocab.size()))];
                doc += rng.uniform() < 0.2 ? ", " : " ";
            }
            docs.push_back(doc);
        }
        const auto got = corpus_keywords(docs, 1);
        const auto ref = oracle::ascii_recount(docs, [](const std::string& w) { return is_stopword(w); });
        REQUIRE(got.rows.size() == ref.size());
        for (const auto& r : got.rows) CHECK(ref.at(r.token) == r.frequency);
        for (std::size_t i = 1; i < got.rows.size(); ++i) {
            const auto& a = got.rows[i - 1];
            const auto& b = got.rows[i];
            CHECK((a.frequency > b.frequency || (a.frequency == b.frequency && a.token < b.token)));
        }
    }
}
