#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "ngrq/io.hpp"

using namespace ngrq;

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("json text round-trips doubles and nulls non-finite values") {
    Json j;
    j["b"] = 1.0 / 3.0;
    j["a"] = std::numeric_limits<double>::quiet_NaN();
    j["n"] = 3;
    j["s"] = "x";
    j["v"] = {0.5, std::numeric_limits<double>::infinity()};
    const std::string text = to_json_text(j);
    const auto back = Json::parse(text);
    CHECK(back["b"].get<double>() == 1.0 / 3.0);
    CHECK(back["a"].is_null());
    CHECK(back["v"][1].is_null());
    CHECK(back["n"].get<int>() == 3);
    // insertion order
    CHECK(text.find("\"b\"") < text.find("\"a\""));
    CHECK(to_json_text(j) == text);
}

TEST_CASE("atomic write replaces the target and leaves no temporary") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("ngrq_io_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path f = dir / "out.json";
    write_atomic(f, "first");
    write_atomic(f, "second");
    std::ifstream in(f);
    std::string content((std::istreambuf_iterator<char>(in)), {});
    CHECK(content == "second");
    int entries = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);
    fs::remove_all(dir);
}

TEST_CASE("csv headers") {
    const auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
    auto ui = DiscreteFunction::zero(Domain::interval(1.0, 5));
    CHECK(first_line(function_csv(ui)) == "index,x,value");
    const std::string fi = function_csv(ui);
    CHECK(std::count(fi.begin(), fi.end(), '\n') == 1 + 3);
    auto ur = DiscreteFunction::zero(Domain::rectangle(1.0, 1.0, 4, 4));
    CHECK(first_line(function_csv(ur)) == "index,x,y,value");
    auto ub = DiscreteFunction::zero(Domain::radial(2.0, 5, 3));
    CHECK(first_line(function_csv(ub)) == "index,r,value");
    const std::string prof = radial_profile_csv(ub);
    CHECK(first_line(prof) == "r,value");
    CHECK(prof.find("2,0\n") != std::string::npos);  // boundary node r = R

    BranchRow r;
    r.lambda = 1.5;
    r.admissible = true;
    const std::string b = branch_csv({r});
    CHECK(first_line(b) == "lambda,mu,energy,norm_gamma,residual,admissible,phi2");
    CHECK(first_line(fiber_csv({{1.0, 2.0, 3.0, 4.0}})) == "t,phi,dphi,ddphi");
}
