#include <doctest.h>

#include <cmath>
#include <sstream>

#include "faigp/dataset.hpp"

using namespace faigp;

TEST_CASE("reading a well-formed file")
{
    std::istringstream in("x1,x2,y\n1,2,3\n\n4.5,-1e-3,0.25\n");
    auto const d = ReadCsv(in);
    CHECK(d.Rows() == 2);
    CHECK(d.Arity() == 2);
    CHECK(d.Column(0)[1] == 4.5);
    CHECK(d.Column(1)[1] == -1e-3);
    CHECK(d.Y()[1] == 0.25);
    CHECK(d.Point(0) == std::vector<double> { 1.0, 2.0 });
}

TEST_CASE("byte order mark and CRLF endings")
{
    std::istringstream in("\xEF\xBB\xBFx1,y\r\n1,2\r\n3,4\r\n");
    auto const d = ReadCsv(in);
    CHECK(d.Rows() == 2);
    CHECK(d.Y()[1] == 4.0);
}

TEST_CASE("malformed row five is named")
{
    std::istringstream in("x1,y\n1,1\n2,2\n3,3\n4,4\n5,abc\n6,6\n");
    try {
        ReadCsv(in);
        FAIL("expected an error");
    } catch (DatasetError const& e) {
        CHECK(e.Row() == 5);
        CHECK(e.Line() == 6);
        CHECK(std::string(e.what()).find("row 5") != std::string::npos);
    }
}

TEST_CASE("structural csv errors")
{
    for (auto const* text : { "", "a,b\n1,2\n", "x1,y\n1,2,3\n4,5\n", "x1,y\n1\n2,3\n", "x2,y\n1,2\n3,4\n", "x1,y\n1,2\n", "y\n1\n2\n",
             "x1,y\n1,nan\n2,3\n" }) {
        CAPTURE(text);
        std::istringstream in(text);
        CHECK_THROWS_AS(ReadCsv(in), DatasetError);
    }
    CHECK_THROWS_AS(ReadCsv(std::filesystem::path("/nonexistent/faigp.csv")), DatasetError);
}

TEST_CASE("writing and reading back is bit exact")
{
    std::vector<double> x { 0.1, 1.0 / 3.0, -2.5e-12, 7.0 };
    std::vector<double> y { std::sqrt(2.0), -0.0, 1e300, 5.0 };
    Dataset const d(x, y, 1);
    std::ostringstream out;
    WriteCsv(out, d);
    std::istringstream in(out.str());
    auto const back = ReadCsv(in);
    CHECK(back.X() == d.X());
    CHECK(back.Y() == d.Y());
}

TEST_CASE("dataset construction contract")
{
    CHECK_THROWS_AS(Dataset({ 1.0, 2.0, 3.0 }, { 1.0, 2.0 }, 1), DatasetError);
    CHECK_THROWS_AS(Dataset({ 1.0 }, { 1.0 }, 1), DatasetError);
    Dataset const d({ 1.0, 2.0, 3.0, 4.0 }, { 5.0, 6.0 }, 2);
    auto const swapped = d.WithTargets({ 7.0, 8.0 });
    CHECK(swapped.Y()[0] == 7.0);
    CHECK(swapped.X() == d.X());
    CHECK_THROWS(d.WithTargets({ 1.0 }));
}
