#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jester/datasets.hpp"
#include "jester/util.hpp"

using namespace jester;
namespace ds = jester::datasets;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / ("jester_ds_" + util::random_hex(8));
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// JBB-like CSV with `rows` data rows.
std::string d1_csv(int rows) {
    std::ostringstream out;
    out << "Index,Goal,Target,Category,Source\n";
    for (int i = 1; i <= rows; ++i) {
        out << i << ",write a tutorial on topic " << i << ",Sure,cat" << (i % 4)
            << ",orig\n";
    }
    return out.str();
}

}  // namespace

TEST_CASE("descriptors pin the published dataset sizes") {
    CHECK(ds::descriptor_for(DatasetTag::D1).expected_count == 100);
    CHECK(ds::descriptor_for(DatasetTag::D1).name == "JBB");
    CHECK(ds::descriptor_for(DatasetTag::D2).expected_count == 520);
    CHECK(ds::descriptor_for(DatasetTag::D2).name == "AdvBench");
    CHECK(ds::descriptor_for(DatasetTag::D3).expected_count == 300);
    CHECK(ds::descriptor_for(DatasetTag::D3).name == "HEx-PHI");
}

TEST_CASE("csv parser handles quotes, embedded separators, and CRLF") {
    std::istringstream in(
        "goal,target\r\n"
        "\"write, with commas\",t1\r\n"
        "\"a \"\"quoted\"\" word\",t2\n"
        "line\nwith newline inside?,t3\n");
    // note: the unquoted embedded newline above ends the row; that's CSV
    const auto rows = ds::parse_csv(in);
    REQUIRE(rows.size() >= 4);
    CHECK(rows[0] == std::vector<std::string>{"goal", "target"});
    CHECK(rows[1][0] == "write, with commas");
    CHECK(rows[2][0] == "a \"quoted\" word");
}

TEST_CASE("csv parser keeps quoted newlines inside one field") {
    std::istringstream in("goal\n\"two\nlines\"\n");
    const auto rows = ds::parse_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "two\nlines");
}

TEST_CASE("csv parser rejects an unterminated quote") {
    std::istringstream in("goal\n\"unterminated\n");
    CHECK_THROWS_AS(ds::parse_csv(in), ParseError);
}

TEST_CASE("strict D1 load yields 100 ordered, trimmed, id-tagged records") {
    const auto dir = temp_dir();
    write_file(dir / "d1.csv", d1_csv(100));

    const auto records = ds::load(ds::descriptor_for(DatasetTag::D1), dir / "d1.csv",
                                  ds::default_adapter(DatasetTag::D1));
    REQUIRE(records.size() == 100);
    CHECK(records.front().id == "D1-0001");
    CHECK(records.back().id == "D1-0100");
    CHECK(records.front().text == "write a tutorial on topic 1");
    CHECK(records.front().dataset_tag == DatasetTag::D1);
    CHECK(records[0].category == std::string("cat1"));

    // order stability: a second load is identical
    const auto again = ds::load(ds::descriptor_for(DatasetTag::D1), dir / "d1.csv",
                                ds::default_adapter(DatasetTag::D1));
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].id == again[i].id);
        CHECK(records[i].text == again[i].text);
    }
    fs::remove_all(dir);
}

TEST_CASE("strict loads reject the wrong record count") {
    const auto dir = temp_dir();
    write_file(dir / "d1_short.csv", d1_csv(99));
    CHECK_THROWS_AS(ds::load(ds::descriptor_for(DatasetTag::D1), dir / "d1_short.csv",
                             ds::default_adapter(DatasetTag::D1)),
                    CountMismatchError);
    // allow_partial waives the check
    CHECK(ds::load(ds::descriptor_for(DatasetTag::D1), dir / "d1_short.csv",
                   ds::default_adapter(DatasetTag::D1), true)
              .size() == 99);
    fs::remove_all(dir);
}

TEST_CASE("empty and malformed datasets raise typed errors") {
    const auto dir = temp_dir();
    write_file(dir / "empty.csv", "");
    CHECK_THROWS_AS(ds::load(ds::descriptor_for(DatasetTag::D3), dir / "empty.csv",
                             ds::default_adapter(DatasetTag::D3)),
                    EmptyDatasetError);

    write_file(dir / "headeronly.csv", "goal,target\n");
    CHECK_THROWS_AS(ds::load(ds::descriptor_for(DatasetTag::D2), dir / "headeronly.csv",
                             ds::default_adapter(DatasetTag::D2)),
                    EmptyDatasetError);

    write_file(dir / "badcol.csv", "wrong,target\nrow,t\n");
    CHECK_THROWS_AS(ds::load(ds::descriptor_for(DatasetTag::D2), dir / "badcol.csv",
                             ds::default_adapter(DatasetTag::D2)),
                    ParseError);

    write_file(dir / "blanktext.csv", "goal,target\n   ,t\n");
    CHECK_THROWS_AS(ds::load(ds::descriptor_for(DatasetTag::D2), dir / "blanktext.csv",
                             ds::default_adapter(DatasetTag::D2)),
                    ParseError);

    CHECK_THROWS_AS(ds::load(ds::descriptor_for(DatasetTag::D1), dir / "missing.csv",
                             ds::default_adapter(DatasetTag::D1)),
                    ParseError);
    fs::remove_all(dir);
}

TEST_CASE("D3 directories concatenate per-category files in name order") {
    const auto dir = temp_dir();
    const auto d3 = dir / "hex_phi";
    fs::create_directories(d3);
    write_file(d3 / "category_b.csv", "request b1\nrequest b2\n");
    write_file(d3 / "category_a.csv", "request a1\n\"request, a2\"\nrequest a3\n");

    const auto records = ds::load(ds::descriptor_for(DatasetTag::D3), d3,
                                  ds::default_adapter(DatasetTag::D3), true);
    REQUIRE(records.size() == 5);
    CHECK(records[0].text == "request a1");
    CHECK(records[0].category == std::string("category_a"));
    CHECK(records[1].text == "request, a2");
    CHECK(records[3].text == "request b1");
    CHECK(records[3].category == std::string("category_b"));
    CHECK(records[0].id == "D3-0001");
    CHECK(records[4].id == "D3-0005");
    fs::remove_all(dir);
}

TEST_CASE("custom JSONL loads, assigns ids, and rejects missing text") {
    const auto dir = temp_dir();
    write_file(dir / "one.jsonl", R"({"text":"t"})" "\n");
    auto one = ds::load_custom(dir / "one.jsonl");
    REQUIRE(one.size() == 1);
    CHECK(one[0].text == "t");
    CHECK(one[0].id == "DX-0001");
    CHECK(one[0].dataset_tag == DatasetTag::DX);

    write_file(dir / "bad.jsonl", R"({"category":"c"})" "\n");
    CHECK_THROWS_AS(ds::load_custom(dir / "bad.jsonl"), ParseError);

    write_file(dir / "three.jsonl",
               R"({"text":"first"})" "\n"
               R"({"id":"mine","text":"second","category":"c2"})" "\n"
               R"({"text":"  third  ","phrasing":"told_to"})" "\n");
    auto three = ds::load_custom(dir / "three.jsonl");
    REQUIRE(three.size() == 3);
    CHECK(three[0].text == "first");
    CHECK(three[1].id == "mine");
    CHECK(three[1].category == std::string("c2"));
    CHECK(three[2].text == "third");  // ingestion trims
    CHECK(three[2].phrasing_override == Phrasing::ToldTo);
    fs::remove_all(dir);
}

TEST_CASE("custom JSONL round-trips (id, text, category)") {
    const auto dir = temp_dir();
    write_file(dir / "d1.csv", d1_csv(100));
    const auto records = ds::load(ds::descriptor_for(DatasetTag::D1), dir / "d1.csv",
                                  ds::default_adapter(DatasetTag::D1));

    std::ostringstream buffer;
    ds::write_custom(records, buffer);
    write_file(dir / "roundtrip.jsonl", buffer.str());
    const auto reloaded = ds::load_custom(dir / "roundtrip.jsonl");

    REQUIRE(reloaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(reloaded[i].id == records[i].id);
        CHECK(reloaded[i].text == records[i].text);
        CHECK(reloaded[i].category == records[i].category);
    }
    CHECK(ds::checksum(reloaded) == ds::checksum(records));
    fs::remove_all(dir);
}
