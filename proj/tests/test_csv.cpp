#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "credinet/csv.hpp"

using namespace credinet;

TEST_CASE("format_sci emits 12 significant digits") {
    CHECK(format_sci(1.0) == "1.00000000000e+00");
    CHECK(format_sci(0.0) == "0.00000000000e+00");
    CHECK(format_sci(-0.5) == "-5.00000000000e-01");
    CHECK(format_sci(1234.56789) == "1.23456789000e+03");
    CHECK(format_sci(3.14159265358979e-12) == "3.14159265359e-12");
    CHECK(format_sci(6.02214076e23) == "6.02214076000e+23");
}

TEST_CASE("comments, header, rows in order") {
    std::ostringstream os;
    {
        CsvWriter w(os, {"a", "b"});
        w.comment("config c=0.5");
        w.row({"1", format_sci(0.5)});
        w.row({"2", format_sci(1.0)});
    }
    CHECK(os.str() ==
          "# config c=0.5\n"
          "a,b\n"
          "1,5.00000000000e-01\n"
          "2,1.00000000000e+00\n");
}

TEST_CASE("empty row set still gets its header") {
    std::ostringstream os;
    { CsvWriter w(os, {"x", "y", "z"}); }
    CHECK(os.str() == "x,y,z\n");
}

TEST_CASE("schema violations throw") {
    std::ostringstream os;
    CHECK_THROWS_AS(CsvWriter(os, {}), std::invalid_argument);
    CsvWriter w(os, {"a", "b"});
    CHECK_THROWS_AS(w.row({"1"}), std::invalid_argument);
    CHECK_THROWS_AS(w.row({"1", "2", "3"}), std::invalid_argument);
    w.row({"1", "2"});
    CHECK_THROWS_AS(w.comment("too late"), std::logic_error);
}
